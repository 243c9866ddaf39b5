# modshare/domain/ports/renderer.py
from abc import ABC, abstractmethod
from typing import Any, Dict, List


class ReportRenderer(ABC):
    @abstractmethod
    def render(self, title: str, columns: List[str], rows: List[Dict[str, Any]]) -> str:
        """Rows are dicts keyed by column name; missing keys render empty"""
        pass
