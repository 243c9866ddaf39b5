# modshare/scenarios: bundled scenario documents
