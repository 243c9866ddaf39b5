# tests/test_simengine.py
import csv
from io import StringIO

import pytest

from modshare.domain.exceptions.exception import RouteInvalidException
from modshare.domain.models.common import Pipelining
from modshare.domain.models.placement import Placement
from modshare.domain.models.routing import Route
from modshare.domain.models.scenario import Request
from modshare.domain.models.simulation import EventKind, SimOptions
from modshare.domain.services.placement import greedy_place
from modshare.domain.services.routing import analytic_latency, route_trace
from modshare.domain.services.sharing import build_shared_catalog, unshare
from modshare.domain.services.simengine import simulate
from modshare.infrastructure.render.timeline import TIMELINE_COLUMNS, gantt_text, segments, timeline_csv
from tests.factories import HEAD, TEXT, VISION, parsed, zero_comm_document

SPLIT = Placement(assign={VISION: ["A"], TEXT: ["B"], HEAD: ["A"]})
PARALLEL_SPLIT = Placement(assign={VISION: ["A"], TEXT: ["B"], HEAD: ["S"]})
ALL_ON_A = Placement(assign={VISION: ["A"], TEXT: ["A"], HEAD: ["S"]})


def run(s, p, **options):
    return simulate(s, p, route_trace(s, p), SimOptions(**options))


def greedy_run(s, **options):
    placement, _ = greedy_place(s, build_shared_catalog(s))
    return run(s, placement, **options)


class TestSingleRequest:
    def test_agrees_with_analytic_latency(self, scenario):
        result = run(scenario, SPLIT)
        q = scenario.trace[0]
        analytic = analytic_latency(q, route_trace(scenario, SPLIT)[q.request_id], scenario)

        assert result.request("q0").t_total == pytest.approx(analytic.t_total, abs=1e-9)
        assert result.request("q0").t_total == pytest.approx(1.604356)
        assert result.makespan == result.request("q0").t_total
        assert len(result.timeline) == 10

    def test_event_sequence(self, scenario):
        kinds = [(e.kind, e.function_key) for e in run(scenario, SPLIT).timeline]

        assert kinds[:3] == [
            (EventKind.SEND_START, TEXT),
            (EventKind.ENCODE_START, VISION),
            (EventKind.SEND_END, TEXT),
        ]
        assert kinds[-2:] == [(EventKind.HEAD_START, HEAD), (EventKind.HEAD_END, HEAD)]

    def test_timeline_is_sorted(self, bundled):
        timeline = greedy_run(bundled("multitask-4")).timeline

        assert [e.time for e in timeline] == sorted(e.time for e in timeline)

    def test_parallel_encoding_takes_the_slowest_path(self):
        s = parsed(zero_comm_document(vision=2.4, text=2.4))
        result = run(s, PARALLEL_SPLIT)

        assert result.request("q0").t_enc == 2.4
        assert result.request("q0").t_total == pytest.approx(2.45)

    def test_sequential_encoding_adds_paths(self):
        s = parsed(zero_comm_document(vision=2.4, text=2.4))
        result = run(s, PARALLEL_SPLIT, parallel_encoding=False)

        assert result.request("q0").t_total == pytest.approx(4.85)

    def test_encoders_on_one_device_queue(self):
        s = parsed(zero_comm_document(vision=2.4, text=2.4))
        metrics = run(s, ALL_ON_A).request("q0")

        assert metrics.t_total == pytest.approx(4.85)
        assert metrics.queue_wait == pytest.approx(2.4)

    def test_extra_compute_slot_removes_contention(self):
        doc = zero_comm_document(vision=2.4, text=2.4)
        doc["devices"][1]["compute_slots"] = 2
        metrics = run(parsed(doc), ALL_ON_A).request("q0")

        assert metrics.t_enc == 2.4
        assert metrics.queue_wait == 0.0

    def test_end_to_end_waits_for_loading(self, scenario):
        result = run(scenario, SPLIT, end_to_end=True)
        loads = [e for e in result.timeline if e.kind == EventKind.LOAD_START]

        assert result.request("q0").t_total == pytest.approx(3.603048)
        assert len(loads) == 3
        assert all(e.request_id == "" for e in loads)

    def test_module_stats(self, scenario):
        result = run(scenario, SPLIT)
        stats = {(m.function_key, m.device_id): m for m in result.modules}

        assert set(stats) == {(VISION, "A"), (TEXT, "B"), (HEAD, "A")}
        assert stats[(VISION, "A")].executions == 1
        assert stats[(VISION, "A")].utilization == pytest.approx(1.0 / 1.604356)

    def test_deterministic(self, bundled):
        s = bundled("multitask-4")

        assert greedy_run(s) == greedy_run(s)

    def test_empty_trace(self, scenario):
        result = run(scenario.with_trace([]), SPLIT)

        assert (result.timeline, result.requests, result.makespan) == ([], [], 0.0)


class TestRouteChecks:
    def test_missing_route(self, scenario):
        with pytest.raises(RouteInvalidException, match="q0"):
            simulate(scenario, SPLIT, {})

    def test_route_to_non_host(self, scenario):
        route = Route(request_id="q0", encoder_route={"vision": "B", "text": "B"}, head_device="A")

        with pytest.raises(RouteInvalidException, match="does not host"):
            simulate(scenario, SPLIT, {"q0": route})

    def test_route_missing_a_modality(self, scenario):
        route = Route(request_id="q0", encoder_route={"vision": "A"}, head_device="A")

        with pytest.raises(RouteInvalidException):
            simulate(scenario, SPLIT, {"q0": route})


class TestSeveralRequests:
    def test_every_request_completes_once(self, bundled):
        s = bundled("multitask-4")
        result = greedy_run(s)

        assert [r.request_id for r in result.requests] == [q.request_id for q in s.trace]
        heads = [e.request_id for e in result.timeline if e.kind == EventKind.HEAD_END]
        assert sorted(heads) == sorted(q.request_id for q in s.trace)
        assert all(r.t_total == pytest.approx(r.t_enc + r.t_head, abs=1e-9) for r in result.requests)

    def test_shared_vision_encoder_serves_requests_in_order(self, bundled):
        result = greedy_run(bundled("multitask-4"))
        starts = [
            (e.request_id, e.time) for e in result.timeline
            if e.kind == EventKind.ENCODE_START and e.function_key == VISION
        ]

        assert [r for r, _ in starts] == ["retrieval-0", "vqa-0", "alignment-0", "classification-0"]
        assert all(e.device_id == "desktop" for e in result.timeline
                   if e.kind == EventKind.ENCODE_START and e.function_key == VISION)

    def test_queue_wait_grows_with_request_order(self, bundled):
        requests = greedy_run(bundled("multitask-4")).requests
        waits = [r.queue_wait for r in requests]
        totals = [r.t_total for r in requests]

        assert waits == pytest.approx([0.0, 1.193933, 2.387866, 3.581799], abs=1e-6)
        assert all(later >= earlier for earlier, later in zip(waits, waits[1:]))
        assert totals == sorted(totals)
        assert totals[0] == pytest.approx(1.224042, abs=1e-6)
        assert totals[-1] == pytest.approx(4.854042, abs=1e-6)

    def test_earlier_head_is_not_starved_by_later_encodes(self, bundled):
        timeline = greedy_run(bundled("multitask-4")).timeline
        desktop = [(e.request_id, e.kind) for e in timeline
                   if e.device_id == "desktop" and e.kind in (EventKind.ENCODE_START, EventKind.HEAD_START)]

        assert desktop[:4] == [
            ("retrieval-0", EventKind.ENCODE_START), ("retrieval-0", EventKind.HEAD_START),
            ("vqa-0", EventKind.ENCODE_START), ("vqa-0", EventKind.HEAD_START),
        ]

    def test_sharing_trades_latency_for_memory(self, bundled):
        shared = bundled("multitask-4")
        private = unshare(shared)

        assert greedy_run(shared).makespan >= greedy_run(private).makespan

    def test_fine_pipelining_never_loses(self, bundled):
        s = bundled("multitask-4")

        assert greedy_run(s).makespan <= greedy_run(s, pipelining=Pipelining.none).makespan + 1e-9

    def test_no_pipelining_runs_back_to_back(self, scenario):
        trace = [Request(request_id=f"q{i}", model_id="clip", source_device="A") for i in range(3)]
        s = scenario.with_trace(trace)
        result = run(s, SPLIT, pipelining=Pipelining.none)

        assert result.makespan == pytest.approx(3 * 1.604356)
        completions = [r.completion for r in result.requests]
        assert completions == sorted(completions)

    def test_coarse_pipelining_sits_between_fine_and_none(self, scenario):
        trace = [Request(request_id=f"q{i}", model_id="clip", source_device="A") for i in range(2)]
        s = scenario.with_trace(trace)
        makespans = {level: run(s, SPLIT, pipelining=level).makespan for level in Pipelining}

        assert makespans[Pipelining.fine] == pytest.approx(3.104356)
        assert makespans[Pipelining.coarse] == pytest.approx(3.105664)
        assert makespans[Pipelining.none] == pytest.approx(3.208712)

    def test_coarse_pipelining_waits_for_every_encoder(self, scenario):
        trace = [Request(request_id=f"q{i}", model_id="clip", source_device="A") for i in range(2)]
        timeline = run(scenario.with_trace(trace), SPLIT, pipelining=Pipelining.coarse).timeline
        first_encoded = max(e.time for e in timeline if e.request_id == "q0" and e.kind == EventKind.ENCODE_END)
        second_sent = min(e.time for e in timeline if e.request_id == "q1" and e.kind == EventKind.SEND_START)

        assert second_sent == first_encoded == pytest.approx(1.501308)

    def test_later_arrivals_start_later(self, scenario):
        trace = [Request(request_id="late", model_id="clip", source_device="A", arrival_time=10.0)]
        metrics = run(scenario.with_trace(trace), SPLIT).request("late")

        assert metrics.arrival == 10.0
        assert metrics.t_total == pytest.approx(1.604356)


class TestTimelineRendering:
    def test_csv_columns(self, scenario):
        rows = list(csv.reader(StringIO(timeline_csv(run(scenario, SPLIT)))))

        assert rows[0] == TIMELINE_COLUMNS
        assert len(rows) == 11
        assert rows[1][1:5] == ["SendStart", "q0", TEXT, "A"]
        assert rows[1][5] == "B"

    def test_segments_pair_starts_with_ends(self, scenario):
        pairs = segments(run(scenario, SPLIT))

        assert [start.kind for start, _ in pairs].count(EventKind.ENCODE_START) == 2
        assert len(pairs) == 5
        assert all(end.time >= start.time for start, end in pairs)

    def test_gantt_lists_busy_devices(self, scenario):
        text = gantt_text(run(scenario, SPLIT, end_to_end=True), scenario, width=40)

        assert text.startswith("timeline 0.000s")
        assert "legend:" in text
        assert "A |" in text and "B |" in text
        assert "load" in text

    def test_gantt_without_events(self, scenario):
        assert gantt_text(run(scenario.with_trace([]), SPLIT), scenario) == "(empty timeline)\n"
