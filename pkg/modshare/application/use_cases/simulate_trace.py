# modshare/application/use_cases/simulate_trace.py
import logging
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel

from modshare.application.use_cases.plan_placement import PlanningOptions, plan
from modshare.domain.models.catalog import MemoryReport
from modshare.domain.models.placement import Placement
from modshare.domain.models.scenario import Scenario
from modshare.domain.models.simulation import SimOptions, SimResult
from modshare.domain.ports.repository import ScenarioRepository
from modshare.domain.services.comparison import memory_footprint
from modshare.domain.services.routing import route_trace
from modshare.domain.services.sharing import build_shared_catalog, memory_accounting, unshare
from modshare.domain.services.simengine import simulate
from modshare.domain.services.validation import check_placement_links

logger = logging.getLogger(__name__)


class SimulationOutcome(BaseModel):
    scenario: Scenario
    placement: Placement
    result: SimResult
    runs: List[SimResult]
    memory: MemoryReport
    deployed_memory: int
    shared: bool

    @property
    def mean_total(self) -> float:
        return sum(r.mean_total for r in self.runs) / len(self.runs)

    @property
    def mean_makespan(self) -> float:
        return sum(r.makespan for r in self.runs) / len(self.runs)


def jittered(scenario: Scenario, rng: np.random.Generator, jitter: float) -> Scenario:
    """Arrival times shifted by U(0, jitter)."""
    if jitter <= 0:
        return scenario
    trace = [
        q.model_copy(update={"arrival_time": q.arrival_time + float(rng.uniform(0.0, jitter))})
        for q in scenario.trace
    ]
    return scenario.with_trace(trace)


class SimulateTrace:
    def __init__(self, repository: ScenarioRepository):
        self.repository = repository

    def execute(self, name: str, placement_path: Optional[Path] = None, share: bool = True,
                options: Optional[PlanningOptions] = None, sim: Optional[SimOptions] = None,
                repeat: int = 1, jitter: float = 0.0, seed: int = 0) -> SimulationOutcome:
        original = self.repository.load_scenario(name)
        memory = memory_accounting(original, build_shared_catalog(original))
        scenario = original if share else unshare(original)

        if placement_path is not None:
            placement = self.repository.load_placement(placement_path)
            check_placement_links(scenario, placement)
        else:
            placement, _ = plan(scenario, options or PlanningOptions())

        rng = np.random.default_rng(seed)
        runs = []
        for i in range(max(1, repeat)):
            # the first run keeps the recorded arrivals
            current = scenario if i == 0 else jittered(scenario, rng, jitter)
            runs.append(simulate(current, placement, route_trace(current, placement), sim))
            logger.info("Run %d: mean latency %.4fs, makespan %.4fs", i + 1, runs[-1].mean_total, runs[-1].makespan)

        return SimulationOutcome(
            scenario=scenario,
            placement=placement,
            result=runs[0],
            runs=runs,
            memory=memory,
            deployed_memory=sum(memory_footprint(scenario, placement).values()),
            shared=share,
        )
