# modshare/infrastructure/render/table_renderer.py
from io import StringIO
from typing import Any, Dict, List

from rich.console import Console
from rich.table import Table

from modshare.domain.ports.renderer import ReportRenderer


class TableRenderer(ReportRenderer):
    def __init__(self, width: int = 120):
        self.width = width

    def render(self, title: str, columns: List[str], rows: List[Dict[str, Any]]) -> str:
        table = Table(title=title, show_lines=False)
        for column in columns:
            table.add_column(column, justify="left" if column == columns[0] else "right")
        for row in rows:
            table.add_row(*[_cell(row.get(column)) for column in columns])

        console = Console(file=StringIO(), width=self.width, record=True, color_system=None)
        console.print(table)
        return console.export_text()


def _cell(value: Any) -> str:
    if value is None:
        return "--"
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)
