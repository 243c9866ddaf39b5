# modshare/domain/services/routing.py
import itertools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

from modshare.domain.exceptions.exception import (
    CapacityExhaustedException,
    ModuleUnplacedException,
    RouteInvalidException,
    SearchSpaceTooLargeException,
)
from modshare.domain.models.placement import Placement
from modshare.domain.models.routing import EncoderPath, LatencyBreakdown, Route
from modshare.domain.models.scenario import ModuleSpec, Request, Scenario
from modshare.domain.services.network_cost import transfer_time

logger = logging.getLogger(__name__)

ROUTE_SEARCH_LIMIT = 10**6


class Router:
    """Routing session: capacity counters live for one pass over a request set."""

    def __init__(self, scenario: Scenario, placement: Placement):
        self.scenario = scenario
        self.placement = placement
        self.remaining: Dict[Tuple[str, str], int] = {
            (fk, device_id): cap
            for fk, per_device in scenario.capacity.items()
            for device_id, cap in per_device.items()
        }

    def route(self, q: Request) -> Route:
        encoders, head = self.scenario.model_modules(q.model_id)
        chosen = [self._pick(m, q) for m in (*encoders, head)]
        for module, device_id in zip((*encoders, head), chosen):
            key = (module.function_key, device_id)
            if key in self.remaining:
                self.remaining[key] -= 1
        return Route(
            request_id=q.request_id,
            encoder_route={m.modality: d for m, d in zip(encoders, chosen)},
            head_device=chosen[-1],
        )

    def _pick(self, module: ModuleSpec, q: Request) -> str:
        fk = module.function_key
        hosts = self.placement.hosts(fk)
        if not hosts:
            raise ModuleUnplacedException(fk)
        open_hosts = [
            d for d in hosts
            if self.remaining.get((fk, d), 1) > 0 and self.scenario.compute.comp_time(fk, d) is not None
        ]
        if not open_hosts:
            raise CapacityExhaustedException(fk, q.request_id)
        return min(open_hosts, key=lambda d: (self.scenario.compute.comp_time(fk, d), self.scenario.device_index(d)))


def route_request(q: Request, p: Placement, s: Scenario, router: Optional[Router] = None) -> Route:
    """Each required module goes to its host with the shortest computation time."""
    return (router or Router(s, p)).route(q)


def route_trace(s: Scenario, p: Placement) -> Dict[str, Route]:
    router = Router(s, p)
    return {q.request_id: router.route(q) for q in s.ordered_trace()}


def encoder_path(s: Scenario, source: str, module: ModuleSpec, device_id: str, head_device: str) -> EncoderPath:
    comp = s.compute.comp_time(module.function_key, device_id)
    if comp is None:
        raise RouteInvalidException(f"Device '{device_id}' cannot run '{module.function_key}'")
    input_comm = transfer_time(s.network, source, device_id, module.input_size)
    output_comm = transfer_time(s.network, device_id, head_device, module.output_size)
    return EncoderPath(
        modality=module.modality,
        function_key=module.function_key,
        device_id=device_id,
        input_comm=input_comm,
        comp=comp,
        output_comm=output_comm,
        path_total=input_comm + comp + output_comm,
    )


def analytic_latency(q: Request, r: Route, s: Scenario) -> LatencyBreakdown:
    encoders, head = s.model_modules(q.model_id)
    missing = [m.modality for m in encoders if m.modality not in r.encoder_route]
    if missing:
        raise RouteInvalidException(f"Route for '{q.request_id}' has no device for {', '.join(missing)}")
    paths = [encoder_path(s, q.source_device, m, r.encoder_route[m.modality], r.head_device) for m in encoders]

    used = [p.device_id for p in paths]
    if len(set(used)) < len(used):
        logger.warning(
            "Request '%s' runs several encoders on one device; the analytic latency ignores their contention",
            q.request_id,
        )

    t_head = s.compute.comp_time(head.function_key, r.head_device)
    if t_head is None:
        raise RouteInvalidException(f"Device '{r.head_device}' cannot run '{head.function_key}'")
    t_enc = max(p.path_total for p in paths)
    return LatencyBreakdown(
        request_id=q.request_id,
        encoders=paths,
        t_enc=t_enc,
        t_head=t_head,
        t_total=t_enc + t_head,
    )


def route_total(s: Scenario, source: str, encoders: Sequence[ModuleSpec], devices: Sequence[str],
                head: ModuleSpec, head_device: str) -> float:
    """analytic t_total for an explicit choice of devices, without building the breakdown."""
    t_enc = max(
        encoder_path(s, source, m, d, head_device).path_total for m, d in zip(encoders, devices)
    )
    return t_enc + s.compute.comp_time(head.function_key, head_device)


def brute_force_route(q: Request, p: Placement, s: Scenario,
                      limit: int = ROUTE_SEARCH_LIMIT) -> Tuple[Route, float]:
    """Joint minimum of analytic t_total over every host combination. Capacities are not applied."""
    encoders, head = s.model_modules(q.model_id)
    options: List[List[str]] = []
    for module in (*encoders, head):
        hosts = [d for d in p.hosts(module.function_key) if s.compute.comp_time(module.function_key, d) is not None]
        if not hosts:
            raise ModuleUnplacedException(module.function_key)
        options.append(hosts)

    size = math.prod(len(o) for o in options)
    if size > limit:
        raise SearchSpaceTooLargeException(size, limit)

    best: Optional[Tuple[str, ...]] = None
    best_total = math.inf
    for combo in itertools.product(*options):
        total = route_total(s, q.source_device, encoders, combo[:-1], head, combo[-1])
        if total < best_total:
            best, best_total = combo, total

    route = Route(
        request_id=q.request_id,
        encoder_route={m.modality: d for m, d in zip(encoders, best[:-1])},
        head_device=best[-1],
    )
    return route, best_total
