# modshare/infrastructure/render/timeline.py
import csv
from io import StringIO
from typing import Dict, List, Tuple

from modshare.domain.models.scenario import Scenario
from modshare.domain.models.simulation import Event, EventKind, SimResult

TIMELINE_COLUMNS = ["time", "kind", "request", "module", "device", "peer"]

_PHASES = {
    EventKind.LOAD_START: (EventKind.LOAD_END, "L", "load"),
    EventKind.SEND_START: (EventKind.SEND_END, "S", "send"),
    EventKind.ENCODE_START: (EventKind.ENCODE_END, "E", "encode"),
    EventKind.FORWARD_START: (EventKind.FORWARD_END, "F", "forward"),
    EventKind.HEAD_START: (EventKind.HEAD_END, "H", "head"),
}


def timeline_csv(result: SimResult) -> str:
    buffer = StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TIMELINE_COLUMNS)
    for e in result.timeline:
        writer.writerow([repr(e.time), e.kind.value, e.request_id, e.function_key, e.device_id, e.peer or ""])
    return buffer.getvalue()


def segments(result: SimResult) -> List[Tuple[Event, Event]]:
    """Start/end pairs in start order."""
    open_events: Dict[tuple, List[Event]] = {}
    pairs = []
    for e in result.timeline:
        if e.kind in _PHASES:
            key = (_PHASES[e.kind][0], e.request_id, e.function_key, e.device_id, e.peer)
            open_events.setdefault(key, []).append(e)
        else:
            start = open_events.get((e.kind, e.request_id, e.function_key, e.device_id, e.peer), [])
            if start:
                pairs.append((start.pop(0), e))
    return sorted(pairs, key=lambda pair: pair[0].time)


def gantt_text(result: SimResult, scenario: Scenario, width: int = 60) -> str:
    pairs = segments(result)
    if not pairs:
        return "(empty timeline)\n"
    origin = min(start.time for start, _ in pairs)
    horizon = max(end.time for _, end in pairs)
    scale = (horizon - origin) / width if horizon > origin else 1.0

    label_width = max(len(d) for d in scenario.device_ids())
    lines = [f"timeline {origin:.3f}s .. {horizon:.3f}s, one column = {scale:.4f}s"]
    lines.append("legend: L load, S send, E encode, F forward, H head")
    for device_id in scenario.device_ids():
        mine = [(s, e) for s, e in pairs if s.device_id == device_id]
        if not mine:
            continue
        row = [" "] * width
        for start, end in mine:
            first = min(width - 1, int((start.time - origin) / scale))
            last = max(first, min(width - 1, int((end.time - origin) / scale) - 1))
            for i in range(first, last + 1):
                row[i] = _PHASES[start.kind][1]
        lines.append(f"{device_id.ljust(label_width)} |{''.join(row)}|")
        for start, end in mine:
            phase = _PHASES[start.kind][2]
            target = f" -> {start.peer}" if start.peer else ""
            request = start.request_id or "-"
            lines.append(
                f"{'':{label_width}}   {start.time:8.3f} - {end.time:8.3f}  {phase:<7} {request:<10} "
                f"{start.function_key}{target}"
            )
    return "\n".join(lines) + "\n"
