# modshare/__init__.py
"""
modshare - planning and evaluation engine for split-and-share deployment
of modular multi-modal models across heterogeneous edge devices
"""

__version__ = "0.1.0"
