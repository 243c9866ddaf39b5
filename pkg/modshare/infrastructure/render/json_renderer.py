# modshare/infrastructure/render/json_renderer.py
import json
from typing import Any, Dict, List

from modshare.domain.ports.renderer import ReportRenderer


class JsonRenderer(ReportRenderer):
    def render(self, title: str, columns: List[str], rows: List[Dict[str, Any]]) -> str:
        payload = {"title": title, "columns": columns, "rows": [{c: row.get(c) for c in columns} for row in rows]}
        return json.dumps(payload, indent=2)
