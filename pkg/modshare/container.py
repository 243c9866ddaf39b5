# modshare/container.py

from typing import Optional, Union

from modshare.config.settings import settings
from modshare.domain.exceptions.exception import ConfigException
from modshare.domain.models.common import OutputFormat
from modshare.domain.ports.renderer import ReportRenderer
from modshare.domain.ports.repository import ScenarioRepository
from modshare.infrastructure.render.csv_renderer import CsvRenderer
from modshare.infrastructure.render.json_renderer import JsonRenderer
from modshare.infrastructure.render.table_renderer import TableRenderer
from modshare.infrastructure.storage.json_repository import JsonScenarioRepository


class Container:
    def __init__(self):
        self._repository = None

    def get_repository(self) -> ScenarioRepository:
        if self._repository is None:
            self._repository = JsonScenarioRepository(scenario_dir=settings.scenario_dir)
        return self._repository

    def get_renderer(self, fmt: Optional[Union[OutputFormat, str]] = None) -> ReportRenderer:
        fmt = (fmt or settings.output.format)
        fmt = fmt.value if isinstance(fmt, OutputFormat) else str(fmt).lower()
        if fmt == "table":
            return TableRenderer()
        elif fmt == "csv":
            return CsvRenderer()
        elif fmt == "json":
            return JsonRenderer()
        else:
            raise ConfigException(f"Unsupported output format: {fmt}")


container = Container()
