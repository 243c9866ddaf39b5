# modshare/infrastructure/render/csv_renderer.py
import csv
from io import StringIO
from typing import Any, Dict, List

from modshare.domain.ports.renderer import ReportRenderer


class CsvRenderer(ReportRenderer):
    """Title is dropped; the header row carries the column names."""

    def render(self, title: str, columns: List[str], rows: List[Dict[str, Any]]) -> str:
        buffer = StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: "" if row.get(c) is None else row.get(c) for c in columns})
        return buffer.getvalue()
