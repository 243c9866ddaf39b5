# tests/conftest.py
import copy
from typing import Dict

import pytest

from modshare.domain.models.scenario import Scenario
from modshare.infrastructure.storage.json_repository import JsonScenarioRepository
from tests.factories import base_document, parsed


@pytest.fixture
def doc() -> Dict:
    return copy.deepcopy(base_document())


@pytest.fixture
def scenario(doc) -> Scenario:
    return parsed(doc)


@pytest.fixture
def repository(tmp_path) -> JsonScenarioRepository:
    return JsonScenarioRepository(scenario_dir=tmp_path)


@pytest.fixture(scope="session")
def bundled():
    repo = JsonScenarioRepository()
    cache = {}

    def load(name: str) -> Scenario:
        if name not in cache:
            cache[name] = repo.load_scenario(name)
        return cache[name]

    return load
