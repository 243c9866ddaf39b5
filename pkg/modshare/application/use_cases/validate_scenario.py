# modshare/application/use_cases/validate_scenario.py
from typing import List

from modshare.domain.exceptions.exception import ScenarioReferenceException, ScenarioValidationException
from modshare.domain.models.catalog import Violation
from modshare.domain.ports.repository import ScenarioRepository


class ValidateScenario:
    def __init__(self, repository: ScenarioRepository):
        self.repository = repository

    def execute(self, name: str) -> List[Violation]:
        """
        Every violation in the scenario; syntax and schema errors still raise
        """
        try:
            self.repository.load_scenario(name)
        except (ScenarioReferenceException, ScenarioValidationException) as e:
            return e.violations
        return []
