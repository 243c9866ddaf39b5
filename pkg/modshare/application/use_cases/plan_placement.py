# modshare/application/use_cases/plan_placement.py
import logging
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel

from modshare.domain.models.catalog import MemoryReport, SharedCatalog
from modshare.domain.models.placement import Placement, PlacementTrace
from modshare.domain.models.scenario import Scenario
from modshare.domain.ports.repository import ScenarioRepository
from modshare.domain.services.placement import (
    PLACEMENT_SEARCH_LIMIT,
    brute_force_place,
    greedy_place,
    placement_devices,
    placement_objective,
    replicate_leftover,
)
from modshare.domain.services.sharing import build_shared_catalog, memory_accounting
from modshare.domain.services.validation import check_placement_links

logger = logging.getLogger(__name__)


class PlanningOptions(BaseModel):
    include_cloud: bool = False
    replicate: bool = False
    accumulate_heads: bool = True
    brute_force_limit: int = PLACEMENT_SEARCH_LIMIT


class PlacementOutcome(BaseModel):
    scenario: Scenario
    catalog: SharedCatalog
    placement: Placement
    trace: Optional[PlacementTrace] = None
    objective: float
    memory: MemoryReport
    method: str
    written_to: Optional[Path] = None


def plan(scenario: Scenario, options: PlanningOptions, upper: bool = False) -> Tuple[Placement, Optional[PlacementTrace]]:
    """Greedy (optionally replicated) or brute-force placement over the eligible devices."""
    catalog = build_shared_catalog(scenario)
    devices = placement_devices(scenario, include_cloud=options.include_cloud)
    if upper:
        placement, _ = brute_force_place(scenario, catalog, devices=devices, limit=options.brute_force_limit)
        check_placement_links(scenario, placement)
        return placement, None
    placement, trace = greedy_place(scenario, catalog, devices=devices, accumulate_heads=options.accumulate_heads)
    if options.replicate:
        placement = replicate_leftover(scenario, placement, catalog, devices=devices,
                                       accumulate_heads=options.accumulate_heads)
    check_placement_links(scenario, placement)
    return placement, trace


class PlanPlacement:
    def __init__(self, repository: ScenarioRepository):
        self.repository = repository

    def execute(self, name: str, options: Optional[PlanningOptions] = None, upper: bool = False,
                output: Optional[Path] = None) -> PlacementOutcome:
        options = options or PlanningOptions()
        scenario = self.repository.load_scenario(name)
        catalog = build_shared_catalog(scenario)
        placement, trace = plan(scenario, options, upper=upper)
        objective = placement_objective(scenario, placement)
        logger.info("Placement objective %.6fs over %d requests", objective, len(scenario.trace))

        written = self.repository.save_placement(placement, output) if output is not None else None
        return PlacementOutcome(
            scenario=scenario,
            catalog=catalog,
            placement=placement,
            trace=trace,
            objective=objective,
            memory=memory_accounting(scenario, catalog),
            method="brute-force" if upper else "greedy",
            written_to=written,
        )
