# modshare/application/use_cases/compare_deployments.py
from typing import List, Optional

from pydantic import BaseModel

from modshare.application.use_cases.plan_placement import PlanningOptions, plan
from modshare.domain.exceptions.exception import ScenarioException, ScenarioValidationException
from modshare.domain.models.catalog import MemoryReport
from modshare.domain.models.scenario import Scenario
from modshare.domain.models.simulation import ComparisonReport, DeploymentRow, SimOptions
from modshare.domain.ports.repository import ScenarioRepository
from modshare.domain.services.comparison import compare_modes, deployment_table
from modshare.domain.services.placement import placement_devices
from modshare.domain.services.sharing import build_shared_catalog, memory_accounting
from modshare.domain.services.validation import validate_scenario


class ComparisonOutcome(BaseModel):
    scenario: Scenario
    modes: ComparisonReport
    deployments: List[DeploymentRow]
    memory: MemoryReport


def narrow(scenario: Scenario, devices: Optional[List[str]] = None, requester: Optional[str] = None) -> Scenario:
    """Keeps only the listed devices and sends every request from the requester."""
    if devices:
        unknown = [d for d in devices if scenario.device(d) is None]
        if unknown:
            raise ScenarioException(f"Unknown devices: {', '.join(unknown)}")
        scenario = scenario.restrict_devices(devices)
    if requester is not None:
        if scenario.device(requester) is None:
            raise ScenarioException(f"Requester '{requester}' is not among the available devices")
        trace = [q.model_copy(update={"source_device": requester}) for q in scenario.trace]
        scenario = scenario.model_copy(update={"requester": requester, "trace": trace})
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioValidationException(violations)
    return scenario


class CompareDeployments:
    def __init__(self, repository: ScenarioRepository):
        self.repository = repository

    def execute(self, name: str, devices: Optional[List[str]] = None, requester: Optional[str] = None,
                options: Optional[PlanningOptions] = None, sim: Optional[SimOptions] = None) -> ComparisonOutcome:
        options = options or PlanningOptions()
        scenario = narrow(self.repository.load_scenario(name), devices, requester)
        placement, _ = plan(scenario, options)
        return ComparisonOutcome(
            scenario=scenario,
            modes=compare_modes(
                scenario, placement, sim,
                devices=placement_devices(scenario, include_cloud=options.include_cloud),
                accumulate_heads=options.accumulate_heads,
            ),
            deployments=deployment_table(
                scenario, requester=requester, include_cloud=options.include_cloud, opts=sim,
                accumulate_heads=options.accumulate_heads,
            ),
            memory=memory_accounting(scenario, build_shared_catalog(scenario)),
        )
