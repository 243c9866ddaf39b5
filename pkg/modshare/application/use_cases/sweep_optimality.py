# modshare/application/use_cases/sweep_optimality.py
import logging
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel

from modshare.domain.exceptions.exception import GenerationFailedException, SearchSpaceTooLargeException
from modshare.domain.models.instance import GenParams
from modshare.domain.ports.repository import ScenarioRepository
from modshare.domain.services.instance_gen import generate
from modshare.domain.services.placement import (
    PLACEMENT_SEARCH_LIMIT,
    brute_force_place,
    greedy_place,
    placement_objective,
)
from modshare.domain.services.sharing import build_shared_catalog

logger = logging.getLogger(__name__)

# relative gap buckets, upper bounds inclusive
GAP_BUCKETS = [("0%", 0.0), ("<=1%", 0.01), ("<=5%", 0.05), ("<=10%", 0.10), (">10%", float("inf"))]
OPTIMAL_TOLERANCE = 1e-9


class SweepRow(BaseModel):
    seed: int
    devices: int
    modules: int
    requests: int
    greedy: float
    brute: float
    gap: float
    relative_gap: float
    optimal: bool
    fingerprint: str


class SweepOutcome(BaseModel):
    rows: List[SweepRow]
    skipped: int
    emitted: List[Path] = []

    @property
    def optimality_rate(self) -> float:
        if not self.rows:
            return 0.0
        return sum(r.optimal for r in self.rows) / len(self.rows)

    @property
    def mean_gap(self) -> float:
        return sum(r.gap for r in self.rows) / len(self.rows) if self.rows else 0.0

    def histogram(self) -> Dict[str, int]:
        counts = {label: 0 for label, _ in GAP_BUCKETS}
        for row in self.rows:
            if row.optimal:
                counts["0%"] += 1
                continue
            label = next(label for label, bound in GAP_BUCKETS[1:] if row.relative_gap <= bound)
            counts[label] += 1
        return counts


def is_optimal(greedy: float, brute: float) -> bool:
    return greedy - brute <= OPTIMAL_TOLERANCE * max(1.0, abs(brute))


class SweepOptimality:
    def __init__(self, repository: ScenarioRepository):
        self.repository = repository

    def execute(self, params: GenParams, seeds: int = 100, emit_dir: Optional[Path] = None,
                limit: int = PLACEMENT_SEARCH_LIMIT) -> SweepOutcome:
        """
        Greedy against brute force on consecutive seeds starting at params.seed
        """
        rows: List[SweepRow] = []
        emitted: List[Path] = []
        skipped = 0
        for seed in range(params.seed, params.seed + seeds):
            try:
                scenario = generate(params.model_copy(update={"seed": seed}))
            except GenerationFailedException as e:
                logger.warning("Skipping seed %d: %s", seed, e)
                skipped += 1
                continue
            if emit_dir is not None:
                emitted.append(self.repository.save_scenario(scenario, Path(emit_dir) / f"sweep-seed-{seed}.json"))

            catalog = build_shared_catalog(scenario)
            greedy, _ = greedy_place(scenario, catalog)
            try:
                _, brute = brute_force_place(scenario, catalog, limit=limit)
            except SearchSpaceTooLargeException as e:
                logger.warning("Skipping seed %d: %s", seed, e)
                skipped += 1
                continue
            greedy_value = placement_objective(scenario, greedy)
            gap = greedy_value - brute
            rows.append(SweepRow(
                seed=seed,
                devices=len(scenario.devices),
                modules=catalog.c,
                requests=len(scenario.trace),
                greedy=greedy_value,
                brute=brute,
                gap=gap,
                relative_gap=gap / brute if brute > 0 else 0.0,
                optimal=is_optimal(greedy_value, brute),
                fingerprint=self.repository.fingerprint(scenario),
            ))
            if len(rows) % 100 == 0:
                logger.info("Swept %d instances", len(rows))
        return SweepOutcome(rows=rows, skipped=skipped, emitted=emitted)
