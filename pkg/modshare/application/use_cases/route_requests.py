# modshare/application/use_cases/route_requests.py
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel

from modshare.application.use_cases.plan_placement import PlanningOptions, plan
from modshare.domain.models.placement import Placement
from modshare.domain.models.routing import LatencyBreakdown, Route
from modshare.domain.ports.repository import ScenarioRepository
from modshare.domain.services.routing import ROUTE_SEARCH_LIMIT, Router, analytic_latency, brute_force_route
from modshare.domain.services.validation import check_placement_links


class RoutedRequest(BaseModel):
    route: Route
    breakdown: LatencyBreakdown
    oracle_route: Optional[Route] = None
    oracle_total: Optional[float] = None

    @property
    def gap(self) -> Optional[float]:
        if self.oracle_total is None:
            return None
        return self.breakdown.t_total - self.oracle_total


class RoutingOutcome(BaseModel):
    placement: Placement
    requests: List[RoutedRequest]

    @property
    def mean_total(self) -> float:
        if not self.requests:
            return 0.0
        return sum(r.breakdown.t_total for r in self.requests) / len(self.requests)

    @property
    def mean_gap(self) -> Optional[float]:
        gaps = [r.gap for r in self.requests if r.gap is not None]
        return sum(gaps) / len(gaps) if gaps else None


class RouteRequests:
    def __init__(self, repository: ScenarioRepository):
        self.repository = repository

    def execute(self, name: str, placement_path: Optional[Path] = None, options: Optional[PlanningOptions] = None,
                oracle: bool = False, limit: int = ROUTE_SEARCH_LIMIT) -> RoutingOutcome:
        """
        Routes the trace over a stored placement, or a fresh greedy one when no file is given
        """
        scenario = self.repository.load_scenario(name)
        if placement_path is not None:
            placement = self.repository.load_placement(placement_path)
            check_placement_links(scenario, placement)
        else:
            placement, _ = plan(scenario, options or PlanningOptions())

        router = Router(scenario, placement)
        routed = []
        for q in scenario.ordered_trace():
            route = router.route(q)
            item = RoutedRequest(route=route, breakdown=analytic_latency(q, route, scenario))
            if oracle:
                item.oracle_route, item.oracle_total = brute_force_route(q, placement, scenario, limit=limit)
            routed.append(item)
        return RoutingOutcome(placement=placement, requests=routed)
