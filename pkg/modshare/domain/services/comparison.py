# modshare/domain/services/comparison.py
import logging
from typing import Dict, List, Optional, Sequence

from modshare.domain.exceptions.exception import InfeasibleException
from modshare.domain.models.common import saving_percent
from modshare.domain.models.placement import Placement
from modshare.domain.models.scenario import DeviceSpec, Request, Scenario
from modshare.domain.models.simulation import ComparisonReport, DeploymentRow, ModeSummary, SimOptions
from modshare.domain.services.placement import centralized_place, greedy_place
from modshare.domain.services.routing import route_trace
from modshare.domain.services.sharing import build_shared_catalog, unshare
from modshare.domain.services.simengine import simulate

logger = logging.getLogger(__name__)

PARALLEL = "parallel"
SEQUENTIAL = "sequential"
NO_SHARE = "no-share"


def centralized_mode(device_id: str) -> str:
    return f"centralized:{device_id}"


def memory_footprint(s: Scenario, p: Placement) -> Dict[str, int]:
    """Parameters hosted per device, replicas included."""
    sizes = {m.function_key: m.memory_req for m in s.modules}
    per_device = {d.device_id: 0 for d in s.devices}
    for fk, hosts in p.assign.items():
        for device_id in hosts:
            per_device[device_id] += sizes[fk]
    return per_device


def _summary(mode: str, s: Scenario, p: Placement, opts: SimOptions) -> ModeSummary:
    result = simulate(s, p, route_trace(s, p), opts)
    footprint = memory_footprint(s, p)
    return ModeSummary(
        mode=mode,
        feasible=True,
        mean_total=result.mean_total,
        makespan=result.makespan,
        max_device_memory=max(footprint.values(), default=0),
        total_memory=sum(footprint.values()),
    )


def _infeasible(mode: str, s: Scenario) -> ModeSummary:
    needed = sum(m.memory_req for m in build_shared_catalog(s).distinct_modules)
    return ModeSummary(mode=mode, feasible=False, max_device_memory=needed, total_memory=needed)


def compare_modes(s: Scenario, p: Placement, opts: Optional[SimOptions] = None,
                  devices: Optional[Sequence[DeviceSpec]] = None,
                  accumulate_heads: bool = True) -> ComparisonReport:
    """Runs the trace in parallel, sequential-encoding, per-device centralized and no-share modes."""
    opts = opts or SimOptions()
    modes = [
        _summary(PARALLEL, s, p, opts.model_copy(update={"parallel_encoding": True})),
        _summary(SEQUENTIAL, s, p, opts.model_copy(update={"parallel_encoding": False})),
    ]

    for device in s.devices:
        name = centralized_mode(device.device_id)
        single = centralized_place(s, device.device_id, share=True)
        modes.append(_summary(name, s, single, opts) if single is not None else _infeasible(name, s))

    private = unshare(s)
    try:
        placement, _ = greedy_place(private, build_shared_catalog(private), devices=_same_devices(private, devices),
                                    accumulate_heads=accumulate_heads)
        modes.append(_summary(NO_SHARE, private, placement, opts))
    except InfeasibleException as e:
        logger.info("No-share placement is infeasible: %s", e)
        modes.append(_infeasible(NO_SHARE, private))

    return ComparisonReport(modes=modes)


def _same_devices(s: Scenario, devices: Optional[Sequence[DeviceSpec]]) -> List[DeviceSpec]:
    if devices is None:
        return s.edge_devices()
    wanted = {d.device_id for d in devices}
    return [d for d in s.devices if d.device_id in wanted]


def _single_request(s: Scenario, model_id: str, requester: str) -> Scenario:
    return s.with_trace([Request(request_id=f"{model_id}-0", model_id=model_id, source_device=requester)])


def _latency_on(s: Scenario, p: Optional[Placement], opts: SimOptions) -> Optional[float]:
    if p is None:
        return None
    return simulate(s, p, route_trace(s, p), opts).mean_total


def deployment_table(s: Scenario, requester: Optional[str] = None, include_cloud: bool = False,
                     opts: Optional[SimOptions] = None, accumulate_heads: bool = True) -> List[DeploymentRow]:
    """Per model: single-device size, largest split module, change in percent and three latencies.

    Cloud latency uses the first cloud device, local latency the requester, split latency a greedy
    placement of the model alone. Each latency is one simulated request from the requester.
    """
    opts = opts or SimOptions()
    requester = requester or s.effective_requester()
    clouds = s.cloud_devices()
    cloud = clouds[0].device_id if clouds else None
    rows = []
    for model in s.models:
        alone = _single_request(s.restrict_models([model.model_id]), model.model_id, requester)
        encoders, head = alone.model_modules(model.model_id)
        sizes = [m.memory_req for m in (*encoders, head)]
        monolithic, split_max = sum(sizes), max(sizes)

        split_latency = None
        try:
            devices = list(alone.devices) if include_cloud else alone.edge_devices()
            placement, _ = greedy_place(alone, build_shared_catalog(alone), devices=devices,
                                        accumulate_heads=accumulate_heads)
            split_latency = _latency_on(alone, placement, opts)
        except InfeasibleException as e:
            logger.info("Split placement of '%s' is infeasible: %s", model.model_id, e)

        rows.append(DeploymentRow(
            model_id=model.model_id,
            centralized_params=monolithic,
            split_max_params=split_max,
            delta_percent=-int(saving_percent(split_max, monolithic, places=0)),
            cloud_latency=_latency_on(alone, centralized_place(alone, cloud), opts) if cloud else None,
            local_latency=_latency_on(alone, centralized_place(alone, requester), opts),
            split_latency=split_latency,
        ))
    return rows
