# modshare/infrastructure/storage/json_repository.py
import json
from importlib import resources
from pathlib import Path
from typing import List, Optional, Union

from pydantic import ValidationError

from modshare.domain.exceptions.exception import ScenarioException, ScenarioSchemaException, ScenarioSyntaxException
from modshare.domain.models.placement import Placement
from modshare.domain.models.scenario import Scenario
from modshare.domain.ports.repository import ScenarioRepository
from modshare.infrastructure.storage.scenario_codec import emit_scenario, fingerprint, parse_scenario

BUNDLED_PACKAGE = "modshare.scenarios"


class JsonScenarioRepository(ScenarioRepository):
    def __init__(self, scenario_dir: Optional[Path] = None):
        self.scenario_dir = Path(scenario_dir) if scenario_dir else None

    def _candidates(self, name: str) -> List[str]:
        return [name] if name.endswith(".json") else [name, f"{name}.json"]

    def resolve(self, name: Union[str, Path]):
        """Explicit path first, then the scenario directory, then the bundled scenarios."""
        text = str(name)
        for candidate in self._candidates(text):
            path = Path(candidate).expanduser()
            if path.is_file():
                return path
            if self.scenario_dir is not None and (self.scenario_dir / candidate).is_file():
                return self.scenario_dir / candidate
            bundled = resources.files(BUNDLED_PACKAGE) / candidate
            if bundled.is_file():
                return bundled
        raise ScenarioException(f"Scenario '{text}' not found; bundled scenarios: {', '.join(self.list_bundled())}")

    def load_scenario(self, name: Union[str, Path]) -> Scenario:
        return parse_scenario(self.resolve(name).read_text(encoding="utf-8"))

    def save_scenario(self, scenario: Scenario, path: Union[str, Path]) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(emit_scenario(scenario), encoding="utf-8")
        return target

    def load_placement(self, path: Union[str, Path]) -> Placement:
        target = Path(path)
        if not target.is_file():
            raise ScenarioException(f"Placement file '{target}' not found")
        text = target.read_text(encoding="utf-8")
        try:
            return Placement.model_validate(json.loads(text))
        except json.JSONDecodeError as e:
            raise ScenarioSyntaxException(f"Malformed placement file: {e.msg}", e.lineno, e.colno)
        except ValidationError as e:
            raise ScenarioSchemaException(f"Invalid placement file '{target}': {e.error_count()} errors")

    def save_placement(self, placement: Placement, path: Union[str, Path]) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(placement.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return target

    def fingerprint(self, scenario: Scenario) -> str:
        return fingerprint(scenario)

    def list_bundled(self) -> List[str]:
        return sorted(
            entry.name[: -len(".json")] for entry in resources.files(BUNDLED_PACKAGE).iterdir()
            if entry.name.endswith(".json")
        )
