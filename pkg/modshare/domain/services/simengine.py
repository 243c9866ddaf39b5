# modshare/domain/services/simengine.py
import logging
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

import simpy

from modshare.domain.exceptions.exception import RouteInvalidException
from modshare.domain.models.common import Pipelining
from modshare.domain.models.placement import Placement
from modshare.domain.models.routing import Route
from modshare.domain.models.scenario import ModuleSpec, Request, Scenario
from modshare.domain.models.simulation import (
    EVENT_RANK,
    Event,
    EventKind,
    ModuleStats,
    RequestMetrics,
    SimOptions,
    SimResult,
)
from modshare.domain.services.network_cost import transfer_time

logger = logging.getLogger(__name__)


def check_routes(s: Scenario, p: Placement, routes: Dict[str, Route]) -> None:
    for q in s.trace:
        route = routes.get(q.request_id)
        if route is None:
            raise RouteInvalidException(f"No route for request '{q.request_id}'")
        encoders, head = s.model_modules(q.model_id)
        if set(route.encoder_route) != {m.modality for m in encoders}:
            raise RouteInvalidException(
                f"Route for '{q.request_id}' covers {sorted(route.encoder_route)}, "
                f"model '{q.model_id}' needs {sorted(m.modality for m in encoders)}"
            )
        pairs = [(m, route.encoder_route[m.modality]) for m in encoders] + [(head, route.head_device)]
        for module, device_id in pairs:
            if device_id not in p.hosts(module.function_key):
                raise RouteInvalidException(
                    f"Request '{q.request_id}' is routed to '{device_id}', which does not host '{module.function_key}'"
                )
            if s.compute.comp_time(module.function_key, device_id) is None:
                raise RouteInvalidException(f"Device '{device_id}' cannot run '{module.function_key}'")


def simulate(s: Scenario, p: Placement, routes: Dict[str, Route], opts: Optional[SimOptions] = None) -> SimResult:
    """Run the trace over the placement and return the sorted timeline with per-request metrics."""
    check_routes(s, p, routes)
    return _Engine(s, p, routes, opts or SimOptions()).run()


class _Engine:
    def __init__(self, s: Scenario, p: Placement, routes: Dict[str, Route], opts: SimOptions):
        self.s = s
        self.p = p
        self.routes = routes
        self.opts = opts
        self.env = simpy.Environment()
        self.slots = {
            d.device_id: simpy.PriorityResource(self.env, capacity=d.compute_slots) for d in s.devices
        }
        self.uplinks = {
            d.device_id: simpy.PriorityResource(self.env, capacity=1) for d in s.devices if d.uplink_serialized
        }
        self.loaded: Dict[Tuple[str, str], simpy.Event] = {}
        self.trace = s.ordered_trace()
        self.order = {q.request_id: i for i, q in enumerate(self.trace)}
        self.records: List[Tuple[tuple, Event]] = []
        # (fk, device) -> [executions, busy time, wait time]
        self.usage: Dict[Tuple[str, str], List[float]] = defaultdict(lambda: [0, 0.0, 0.0])
        self.metrics: Dict[str, RequestMetrics] = {}
        # (device, request order) -> executions not yet started, the turn event, the previous order there
        self.pending: Dict[Tuple[str, int], int] = defaultdict(int)
        self.turns: Dict[Tuple[str, int], simpy.Event] = {}
        self.ahead: Dict[Tuple[str, int], Optional[int]] = {}
        self._plan_turns()

    def run(self) -> SimResult:
        if self.opts.end_to_end:
            self._start_loaders()

        previous_encoded = previous_done = None
        for q in self.trace:
            encoded, done = self.env.event(), self.env.event()
            gate = None
            if self.opts.pipelining == Pipelining.coarse:
                gate = previous_encoded
            elif self.opts.pipelining == Pipelining.none:
                gate = previous_done
            self.env.process(self._request(q, self.routes[q.request_id], gate, encoded, done))
            previous_encoded, previous_done = encoded, done

        self.env.run()

        requests = [self.metrics[q.request_id] for q in self.trace]
        makespan = 0.0
        if requests:
            makespan = max(r.completion for r in requests) - min(r.arrival for r in requests)
        self.records.sort(key=lambda item: item[0])
        result = SimResult(
            timeline=[event for _, event in self.records],
            requests=requests,
            makespan=makespan,
            modules=self._module_stats(makespan),
        )
        logger.info("Simulated %d requests, makespan %.4fs", len(requests), makespan)
        return result

    def _plan_turns(self) -> None:
        """A device serves requests in trace order: a request's executions there start only after
        every execution of the previous request on that device has started."""
        last: Dict[str, int] = {}
        for q in self.trace:
            order = self.order[q.request_id]
            route = self.routes[q.request_id]
            encoders, _ = self.s.model_modules(q.model_id)
            for device_id in [route.encoder_route[m.modality] for m in encoders] + [route.head_device]:
                key = (device_id, order)
                if key not in self.turns:
                    self.turns[key] = self.env.event()
                    self.ahead[key] = last.get(device_id)
                    last[device_id] = order
                self.pending[key] += 1

    def _wait_turn(self, device_id: str, order: int):
        ahead = self.ahead[(device_id, order)]
        if ahead is not None:
            turn = self.turns[(device_id, ahead)]
            if not turn.processed:
                yield turn

    def _emit(self, kind: EventKind, request_id: str, fk: str, device_id: str, peer: Optional[str] = None) -> None:
        key = (self.env.now, self.order.get(request_id, -1), EVENT_RANK[kind], fk, self.s.device_index(device_id))
        self.records.append((key, Event(
            time=self.env.now, kind=kind, request_id=request_id, function_key=fk, device_id=device_id, peer=peer,
        )))

    def _start_loaders(self) -> None:
        for device in self.s.devices:
            hosted = [fk for fk, hosts in self.p.assign.items() if device.device_id in hosts]
            for fk in hosted:
                self.loaded[(fk, device.device_id)] = self.env.event()
            if hosted:
                self.env.process(self._load(device.device_id, hosted))

    def _load(self, device_id: str, hosted: List[str]):
        """Modules load one after another from time zero."""
        for fk in hosted:
            self._emit(EventKind.LOAD_START, "", fk, device_id)
            yield self.env.timeout(self.s.compute.load_time(fk, device_id))
            self._emit(EventKind.LOAD_END, "", fk, device_id)
            self.loaded[(fk, device_id)].succeed()

    def _wait_loaded(self, fk: str, device_id: str):
        event = self.loaded.get((fk, device_id))
        if event is not None and not event.processed:
            yield event

    def _request(self, q: Request, route: Route, gate: Optional[simpy.Event],
                 encoded: simpy.Event, done: simpy.Event):
        yield self.env.timeout(q.arrival_time)
        if gate is not None:
            yield gate

        encoders, head = self.s.model_modules(q.model_id)
        # longest encoding first, so the slowest encoder gets its input earliest
        plan = sorted(
            enumerate(encoders),
            key=lambda item: (-self.s.compute.comp_time(item[1].function_key, route.encoder_route[item[1].modality]),
                              item[0]),
        )
        encode_done = [self.env.event() for _ in plan]
        paths = []
        for rank, ((_, module), finished) in enumerate(zip(plan, encode_done)):
            device_id = route.encoder_route[module.modality]
            paths.append(self.env.process(
                self._encoder(q, module, device_id, route.head_device, rank, finished)
            ))
            if not self.opts.parallel_encoding:
                yield finished

        yield self.env.all_of(encode_done)
        encoded.succeed()
        yield self.env.all_of(paths)
        # the last output to arrive sets t_enc; its queueing counts towards queue_wait
        last_arrival, path_wait = max((path.value for path in paths), key=lambda value: value[0])

        yield from self._wait_loaded(head.function_key, route.head_device)
        head_wait = yield from self._execute(q, head, route.head_device, EventKind.HEAD_START, EventKind.HEAD_END)

        end = self.env.now
        self.metrics[q.request_id] = RequestMetrics(
            request_id=q.request_id,
            model_id=q.model_id,
            arrival=q.arrival_time,
            completion=end,
            t_enc=last_arrival - q.arrival_time,
            t_head=end - last_arrival,
            t_total=end - q.arrival_time,
            queue_wait=path_wait + head_wait,
        )
        done.succeed()

    def _encoder(self, q: Request, module: ModuleSpec, device_id: str, head_device: str, rank: int,
                 finished: simpy.Event):
        fk = module.function_key
        source = q.source_device
        order = self.order[q.request_id]

        if device_id != source:
            duration = transfer_time(self.s.network, source, device_id, module.input_size)
            uplink = self.uplinks.get(source)
            if uplink is None:
                yield from self._transfer(q, fk, source, device_id, duration, EventKind.SEND_START, EventKind.SEND_END)
            else:
                with uplink.request(priority=(self.env.now, order, rank)) as slot:
                    yield slot
                    yield from self._transfer(q, fk, source, device_id, duration,
                                              EventKind.SEND_START, EventKind.SEND_END)

        yield from self._wait_loaded(fk, device_id)
        wait = yield from self._execute(q, module, device_id, EventKind.ENCODE_START, EventKind.ENCODE_END)
        finished.succeed()

        if device_id != head_device:
            duration = transfer_time(self.s.network, device_id, head_device, module.output_size)
            yield from self._transfer(q, fk, device_id, head_device, duration,
                                      EventKind.FORWARD_START, EventKind.FORWARD_END)
        return self.env.now, wait

    def _transfer(self, q: Request, fk: str, src: str, dst: str, duration: float,
                  start: EventKind, end: EventKind):
        self._emit(start, q.request_id, fk, src, peer=dst)
        yield self.env.timeout(duration)
        self._emit(end, q.request_id, fk, src, peer=dst)

    def _execute(self, q: Request, module: ModuleSpec, device_id: str, start: EventKind, end: EventKind):
        """Hold one compute slot for the module's computation time; returns the queueing wait."""
        fk = module.function_key
        order = self.order[q.request_id]
        enqueued = self.env.now
        yield from self._wait_turn(device_id, order)
        with self.slots[device_id].request(priority=(order, enqueued, fk)) as slot:
            yield slot
            wait = self.env.now - enqueued
            key = (device_id, order)
            self.pending[key] -= 1
            if self.pending[key] == 0:
                self.turns[key].succeed()
            comp = self.s.compute.comp_time(fk, device_id)
            self._emit(start, q.request_id, fk, device_id)
            yield self.env.timeout(comp)
            self._emit(end, q.request_id, fk, device_id)
        usage = self.usage[(fk, device_id)]
        usage[0] += 1
        usage[1] += comp
        usage[2] += wait
        return wait

    def _module_stats(self, makespan: float) -> List[ModuleStats]:
        stats = []
        for (fk, device_id), (executions, busy, waited) in sorted(
            self.usage.items(), key=lambda item: (self.s.device_index(item[0][1]), item[0][0])
        ):
            stats.append(ModuleStats(
                function_key=fk,
                device_id=device_id,
                executions=int(executions),
                busy_time=busy,
                utilization=busy / makespan if makespan > 0 else 0.0,
                mean_queue_length=waited / makespan if makespan > 0 else 0.0,
            ))
        return stats
