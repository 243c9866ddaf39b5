# modshare/domain/ports/repository.py
from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Union

from modshare.domain.models.placement import Placement
from modshare.domain.models.scenario import Scenario


class ScenarioRepository(ABC):
    @abstractmethod
    def load_scenario(self, name: Union[str, Path]) -> Scenario:
        """Name may be a path, a file in the scenario directory or a bundled scenario"""
        pass

    @abstractmethod
    def save_scenario(self, scenario: Scenario, path: Union[str, Path]) -> Path:
        pass

    @abstractmethod
    def load_placement(self, path: Union[str, Path]) -> Placement:
        pass

    @abstractmethod
    def save_placement(self, placement: Placement, path: Union[str, Path]) -> Path:
        pass

    @abstractmethod
    def list_bundled(self) -> List[str]:
        """Names of the scenarios shipped with the package"""
        pass

    @abstractmethod
    def fingerprint(self, scenario: Scenario) -> str:
        """Stable digest of the stored form"""
        pass
