# modshare/domain/services/placement.py
import itertools
import logging
import math
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from modshare.domain.exceptions.exception import PlacementInfeasibleException, SearchSpaceTooLargeException
from modshare.domain.models.catalog import SharedCatalog
from modshare.domain.models.common import ModuleKind
from modshare.domain.models.placement import CandidateScore, Placement, PlacementStep, PlacementTrace
from modshare.domain.models.scenario import ComputeProfile, DeviceSpec, ModuleSpec, Request, Scenario
from modshare.domain.services.network_cost import transfer_time
from modshare.domain.services.routing import Router, route_total
from modshare.domain.services.sharing import build_shared_catalog, unshare

logger = logging.getLogger(__name__)

PLACEMENT_SEARCH_LIMIT = 10**7


def completion_time_encoder(m: ModuleSpec, n: DeviceSpec, partial: Placement, profile: ComputeProfile,
                            skip: FrozenSet[str] = frozenset()) -> Optional[float]:
    """Own computation time plus that of every module already on the device (keys in skip excluded)."""
    own = profile.comp_time(m.function_key, n.device_id)
    if own is None:
        return None
    total = own
    for fk in partial.modules_on(n.device_id):
        if fk in skip:
            continue
        total += profile.comp_time(fk, n.device_id) or 0.0
    return total


def completion_time_head(m: ModuleSpec, n: DeviceSpec, profile: ComputeProfile) -> Optional[float]:
    return profile.comp_time(m.function_key, n.device_id)


def placement_devices(s: Scenario, include_cloud: bool = False,
                      device_ids: Optional[Iterable[str]] = None) -> List[DeviceSpec]:
    """Devices eligible for split placement, in scenario order."""
    if device_ids is not None:
        wanted = set(device_ids)
        return [d for d in s.devices if d.device_id in wanted]
    return list(s.devices) if include_cloud else s.edge_devices()


def _processing_order(catalog: SharedCatalog) -> List[ModuleSpec]:
    return sorted(catalog.distinct_modules, key=lambda m: (-m.memory_req, m.function_key))


def _completion_fn(s: Scenario, catalog: SharedCatalog,
                   accumulate_heads: bool) -> Callable[[ModuleSpec, DeviceSpec, Placement], Optional[float]]:
    skip = frozenset() if accumulate_heads else frozenset(
        m.function_key for m in catalog.distinct_modules if m.kind == ModuleKind.head
    )

    def completion(m: ModuleSpec, n: DeviceSpec, partial: Placement) -> Optional[float]:
        if m.kind == ModuleKind.encoder:
            return completion_time_encoder(m, n, partial, s.compute, skip)
        return completion_time_head(m, n, s.compute)

    return completion


def _ranked(s: Scenario, scores: List[CandidateScore]) -> List[CandidateScore]:
    return sorted(scores, key=lambda c: (c.t_place is None, c.t_place or 0.0, s.device_index(c.device_id)))


def _initial_residual(s: Scenario) -> Dict[str, int]:
    return {d.device_id: d.memory_capacity for d in s.devices}


def greedy_place(s: Scenario, catalog: SharedCatalog, devices: Optional[Sequence[DeviceSpec]] = None,
                 accumulate_heads: bool = True) -> Tuple[Placement, PlacementTrace]:
    """Largest module first, each onto the feasible device with the shortest completion time."""
    devices = list(devices) if devices is not None else s.edge_devices()
    completion = _completion_fn(s, catalog, accumulate_heads)
    placement = Placement(assign={}, residual_memory=_initial_residual(s))
    trace = PlacementTrace()

    for module in _processing_order(catalog):
        fk = module.function_key
        ranked = _ranked(s, [
            CandidateScore(device_id=d.device_id, t_place=completion(module, d, placement)) for d in devices
        ])
        chosen = next(
            (c.device_id for c in ranked
             if c.t_place is not None and placement.residual_memory[c.device_id] >= module.memory_req),
            None,
        )
        trace.steps.append(PlacementStep(function_key=fk, memory_req=module.memory_req,
                                         candidates=ranked, chosen=chosen))
        if chosen is None:
            logger.warning("No device has room and compute support for '%s' (%d params)", fk, module.memory_req)
            raise PlacementInfeasibleException(fk, trace=trace)
        logger.debug("Placed '%s' on '%s'", fk, chosen)
        placement.assign[fk] = [chosen]
        placement.residual_memory[chosen] -= module.memory_req

    return placement, trace


def replicate_leftover(s: Scenario, p: Placement, catalog: Optional[SharedCatalog] = None,
                       devices: Optional[Sequence[DeviceSpec]] = None,
                       accumulate_heads: bool = True) -> Placement:
    """Fill spare memory with replicas, largest modules first."""
    catalog = catalog or build_shared_catalog(s)
    devices = list(devices) if devices is not None else s.edge_devices()
    completion = _completion_fn(s, catalog, accumulate_heads)
    result = p.model_copy(deep=True)

    for module in _processing_order(catalog):
        fk = module.function_key
        while True:
            hosts = result.hosts(fk)
            scores = [
                CandidateScore(device_id=d.device_id, t_place=completion(module, d, result))
                for d in devices
                if d.device_id not in hosts and result.residual_memory.get(d.device_id, 0) >= module.memory_req
            ]
            feasible = [c for c in _ranked(s, scores) if c.t_place is not None]
            if not feasible:
                break
            target = feasible[0].device_id
            logger.debug("Replicating '%s' on '%s'", fk, target)
            result.assign[fk] = sorted([*hosts, target], key=s.device_index)
            result.residual_memory[target] -= module.memory_req
    return result


def placement_objective(s: Scenario, p: Placement, requests: Optional[List[Request]] = None) -> float:
    """Sum of analytic t_total over the requests, routed by shortest computation time."""
    requests = s.ordered_trace() if requests is None else requests
    router = Router(s, p)
    total = 0.0
    for q in requests:
        route = router.route(q)
        encoders, head = s.model_modules(q.model_id)
        devices = [route.encoder_route[m.modality] for m in encoders]
        total += route_total(s, q.source_device, encoders, devices, head, route.head_device)
    return total


def centralized_place(s: Scenario, device: str, share: bool = True) -> Optional[Placement]:
    """Everything on one device, or None when it lacks memory or compute support.

    With share=False the modules are the per-model copies of unshare(s), and routes must be
    computed against that scenario.
    """
    scenario = s if share else unshare(s)
    spec = scenario.device(device)
    if spec is None:
        return None
    catalog = build_shared_catalog(scenario)
    needed = sum(m.memory_req for m in catalog.distinct_modules)
    runnable = all(scenario.compute.comp_time(m.function_key, device) is not None for m in catalog.distinct_modules)
    if needed > spec.memory_capacity or not runnable:
        logger.info("Centralized placement on '%s' is infeasible", device)
        return None
    residual = _initial_residual(scenario)
    residual[device] -= needed
    return Placement(assign={m.function_key: [device] for m in catalog.distinct_modules}, residual_memory=residual)


class _FastObjective:
    """Analytic objective for single-host placements with precomputed path terms."""

    def __init__(self, s: Scenario, catalog: SharedCatalog, requests: List[Request]):
        self.s = s
        self.index = {fk: i for i, fk in enumerate(catalog.function_keys())}
        self.jobs = []
        for q in requests:
            encoders, head = s.model_modules(q.model_id)
            self.jobs.append((q, [(self.index[m.function_key], m) for m in encoders], (self.index[head.function_key], head)))
        self._comm: Dict[Tuple[str, str, float], float] = {}

    def _transfer(self, src: str, dst: str, size: float) -> float:
        key = (src, dst, size)
        value = self._comm.get(key)
        if value is None:
            value = self._comm[key] = transfer_time(self.s.network, src, dst, size)
        return value

    def __call__(self, combo: Tuple[str, ...]) -> float:
        total = 0.0
        comp = self.s.compute.comp_time
        for q, encoders, (head_i, head) in self.jobs:
            head_device = combo[head_i]
            t_enc = max(
                self._transfer(q.source_device, combo[i], m.input_size) + comp(m.function_key, combo[i])
                + self._transfer(combo[i], head_device, m.output_size)
                for i, m in encoders
            )
            total += t_enc + comp(head.function_key, head_device)
        return total


def _within_capacity(s: Scenario, combo: Tuple[str, ...], catalog: SharedCatalog, requests: List[Request]) -> bool:
    if not s.capacity:
        return True
    index = {fk: i for i, fk in enumerate(catalog.function_keys())}
    used: Dict[Tuple[str, str], int] = {}
    for q in requests:
        encoders, head = s.model_modules(q.model_id)
        for m in (*encoders, head):
            key = (m.function_key, combo[index[m.function_key]])
            used[key] = used.get(key, 0) + 1
    return all(
        count <= s.capacity_of(fk, device_id)
        for (fk, device_id), count in used.items()
        if s.capacity_of(fk, device_id) is not None
    )


def brute_force_place(s: Scenario, catalog: SharedCatalog, request_set: Optional[List[Request]] = None,
                      devices: Optional[Sequence[DeviceSpec]] = None,
                      limit: int = PLACEMENT_SEARCH_LIMIT) -> Tuple[Placement, float]:
    """Exhaustive search over single-host placements minimising the summed analytic latency.

    Candidates are enumerated with modules in catalog order and devices in scenario order;
    the first candidate reaching the minimum wins.
    """
    devices = list(devices) if devices is not None else s.edge_devices()
    requests = s.ordered_trace() if request_set is None else list(request_set)
    modules = catalog.distinct_modules

    size = len(devices) ** len(modules)
    if size > limit:
        raise SearchSpaceTooLargeException(size, limit)

    options: List[List[str]] = []
    for module in modules:
        fits = [
            d.device_id for d in devices
            if d.memory_capacity >= module.memory_req and s.compute.comp_time(module.function_key, d.device_id) is not None
        ]
        if not fits:
            raise PlacementInfeasibleException(module.function_key)
        options.append(fits)

    capacity = {d.device_id: d.memory_capacity for d in devices}
    objective = _FastObjective(s, catalog, requests)
    best: Optional[Tuple[str, ...]] = None
    best_value = math.inf
    for combo in itertools.product(*options):
        load: Dict[str, int] = {}
        for module, device_id in zip(modules, combo):
            load[device_id] = load.get(device_id, 0) + module.memory_req
        if any(load[d] > capacity[d] for d in load):
            continue
        if not _within_capacity(s, combo, catalog, requests):
            continue
        value = objective(combo)
        if value < best_value:
            best, best_value = combo, value

    if best is None:
        raise PlacementInfeasibleException(message="No placement satisfies every memory and capacity limit")

    residual = _initial_residual(s)
    for module, device_id in zip(modules, best):
        residual[device_id] -= module.memory_req
    placement = Placement(assign={m.function_key: [d] for m, d in zip(modules, best)}, residual_memory=residual)
    return placement, best_value
