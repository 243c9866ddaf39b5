# modshare/domain/services/validation.py
from collections import Counter
from typing import Dict, List, Set, Tuple

from modshare.domain.exceptions.exception import ScenarioValidationException
from modshare.domain.models.catalog import Violation
from modshare.domain.models.common import ModuleKind
from modshare.domain.models.placement import Placement
from modshare.domain.models.scenario import ModuleSpec, Scenario

DANGLING = "DanglingReference"


def validate_scenario(s: Scenario) -> List[Violation]:
    """Every invariant violation in the scenario, ordered by (subject type, subject id)."""
    found: List[Violation] = []
    found += _duplicate_ids(s)
    found += _function_key_conflicts(s)
    found += _model_checks(s)
    found += _trace_checks(s)
    found += _profile_checks(s)
    # identical findings can come from two checks (e.g. a repeated id)
    unique = {(v.kind, v.subject_type, v.subject_id, v.message): v for v in found}
    return sorted(unique.values(), key=Violation.sort_key)


def _violation(kind: str, subject_type: str, subject_id: str, message: str) -> Violation:
    return Violation(kind=kind, subject_type=subject_type, subject_id=subject_id, message=message)


def _duplicate_ids(s: Scenario) -> List[Violation]:
    groups = [
        ("device", [d.device_id for d in s.devices]),
        ("module", [m.module_id for m in s.modules]),
        ("model", [k.model_id for k in s.models]),
        ("request", [q.request_id for q in s.trace]),
    ]
    out = []
    for subject_type, ids in groups:
        for value, count in Counter(ids).items():
            if count > 1:
                out.append(_violation("DuplicateId", subject_type, value,
                                      f"{subject_type} id '{value}' is used {count} times"))
    return out


def _function_key_conflicts(s: Scenario) -> List[Violation]:
    first: Dict[str, ModuleSpec] = {}
    conflicting: Set[str] = set()
    for module in s.modules:
        seen = first.setdefault(module.function_key, module)
        if seen.identity() != module.identity():
            conflicting.add(module.function_key)
    return [
        _violation("FunctionKeyConflict", "module", fk,
                   f"modules with function key '{fk}' disagree on kind, modality, memory or output size")
        for fk in sorted(conflicting)
    ]


def _model_checks(s: Scenario) -> List[Violation]:
    modules = {m.module_id: m for m in s.modules}
    out = []
    for model in s.models:
        mid = model.model_id
        if not model.encoder_ids:
            out.append(_violation("EmptyEncoders", "model", mid, f"model '{mid}' has no encoders"))
        modalities: List[str] = []
        for encoder_id in model.encoder_ids:
            module = modules.get(encoder_id)
            if module is None:
                out.append(_violation(DANGLING, "model", mid,
                                      f"model '{mid}' references unknown encoder '{encoder_id}'"))
            elif module.kind != ModuleKind.encoder:
                out.append(_violation("WrongModuleKind", "model", mid,
                                      f"model '{mid}' lists '{encoder_id}' as an encoder but it is a head"))
            else:
                modalities.append(module.modality)
        for modality, count in Counter(modalities).items():
            if count > 1:
                out.append(_violation("DuplicateModality", "model", mid,
                                      f"model '{mid}' has {count} encoders for modality '{modality}'"))
        head = modules.get(model.head_id)
        if head is None:
            out.append(_violation(DANGLING, "model", mid,
                                  f"model '{mid}' references unknown head '{model.head_id}'"))
        elif head.kind != ModuleKind.head:
            out.append(_violation("WrongModuleKind", "model", mid,
                                  f"model '{mid}' uses encoder '{model.head_id}' as its head"))
    return out


def _trace_checks(s: Scenario) -> List[Violation]:
    devices = set(s.device_ids())
    models = {k.model_id for k in s.models}
    out = []
    for q in s.trace:
        if q.model_id not in models:
            out.append(_violation(DANGLING, "request", q.request_id,
                                  f"request '{q.request_id}' references unknown model '{q.model_id}'"))
        if q.source_device not in devices:
            out.append(_violation(DANGLING, "request", q.request_id,
                                  f"request '{q.request_id}' comes from unknown device '{q.source_device}'"))
    if s.requester is not None and s.requester not in devices:
        out.append(_violation(DANGLING, "scenario", "requester",
                              f"requester '{s.requester}' is not a device"))
    return out


def _profile_checks(s: Scenario) -> List[Violation]:
    devices = set(s.device_ids())
    keys = {m.function_key for m in s.modules}
    out = []
    for fk, per_device in s.compute.entries.items():
        if fk not in keys:
            out.append(_violation(DANGLING, "compute", fk, f"compute entry for unknown function key '{fk}'"))
        for device_id in per_device:
            if device_id not in devices:
                out.append(_violation(DANGLING, "compute", fk,
                                      f"compute entry for '{fk}' on unknown device '{device_id}'"))
    for src, per_dst in s.network.links.items():
        for dst in per_dst:
            for end in (src, dst):
                if end not in devices:
                    out.append(_violation(DANGLING, "network", f"{src}->{dst}",
                                          f"link {src}->{dst} references unknown device '{end}'"))
    for fk, per_device in s.capacity.items():
        if fk not in keys:
            out.append(_violation(DANGLING, "capacity", fk, f"capacity for unknown function key '{fk}'"))
        for device_id, cap in per_device.items():
            if device_id not in devices:
                out.append(_violation(DANGLING, "capacity", fk,
                                      f"capacity for '{fk}' on unknown device '{device_id}'"))
            elif s.compute.lookup(fk, device_id) is None:
                out.append(_violation("CapacityNotHostable", "capacity", fk,
                                      f"capacity for '{fk}' on '{device_id}', which cannot run it"))
            if cap < 1:
                out.append(_violation("InvalidCapacity", "capacity", fk,
                                      f"capacity for '{fk}' on '{device_id}' must be at least 1"))
    return out


def placement_link_violations(s: Scenario, p: Placement) -> List[Violation]:
    """Links the trace needs over this placement: each source to its encoders' hosts, those hosts to the head's hosts."""
    needed: Set[Tuple[str, str]] = set()
    for q in s.trace:
        encoders, head = s.model_modules(q.model_id)
        head_hosts = p.hosts(head.function_key)
        for encoder in encoders:
            for host in p.hosts(encoder.function_key):
                needed.add((q.source_device, host))
                needed.update((host, dst) for dst in head_hosts)
    return [
        _violation("MissingLink", "network", f"{src}->{dst}", f"no link from '{src}' to '{dst}'")
        for src, dst in sorted(needed)
        if src != dst and s.network.link(src, dst) is None
    ]


def check_placement_links(s: Scenario, p: Placement) -> None:
    violations = placement_link_violations(s, p)
    if violations:
        raise ScenarioValidationException(violations)
