# modshare/infrastructure/storage/scenario_codec.py
import hashlib
import json
from typing import Annotated, Any, Dict, List, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PositiveFloat, ValidationError

from modshare.domain.exceptions.exception import (
    ScenarioReferenceException,
    ScenarioSchemaException,
    ScenarioSyntaxException,
    ScenarioValidationException,
)
from modshare.domain.models.common import DeviceTier, ModuleKind, parse_param_count
from modshare.domain.models.scenario import (
    ComputeEntry,
    ComputeProfile,
    DeviceSpec,
    Link,
    ModelSpec,
    ModuleSpec,
    NetworkProfile,
    Request,
    Scenario,
)
from modshare.domain.services.validation import DANGLING, validate_scenario

ParamCount = Annotated[int, BeforeValidator(parse_param_count)]


class _Doc(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DeviceDoc(_Doc):
    device_id: str
    memory_capacity: ParamCount
    compute_slots: int = 1
    uplink_serialized: bool = True
    tier: DeviceTier = DeviceTier.edge


class ModuleDoc(_Doc):
    module_id: str
    function_key: str
    kind: ModuleKind
    modality: Optional[str] = None
    memory_req: ParamCount
    output_size: float
    input_size: float = 0.0


class EntryDoc(_Doc):
    comp_time: float
    load_time: float = 0.0


class DerivedDoc(_Doc):
    """comp_time = work / speed for every pair not excluded; explicit entries win."""
    work: Dict[str, float]
    speed: Dict[str, PositiveFloat]
    # load_time = load_work / speed
    load_work: Dict[str, float] = Field(default_factory=dict)
    exclude: Dict[str, List[str]] = Field(default_factory=dict)


class ComputeDoc(_Doc):
    entries: Dict[str, Dict[str, EntryDoc]] = Field(default_factory=dict)
    derived: Optional[DerivedDoc] = None


class LinkDoc(_Doc):
    latency: float
    bandwidth: float


class NetworkDoc(_Doc):
    links: Dict[str, Dict[str, LinkDoc]] = Field(default_factory=dict)
    # applies to every ordered pair of distinct devices without an explicit link
    default: Optional[LinkDoc] = None
    # an explicit a->b link also stands for b->a unless that one is given
    symmetric: bool = False


class ModelDoc(_Doc):
    model_id: str
    encoder_ids: List[str]
    head_id: str


class RequestDoc(_Doc):
    request_id: str
    model_id: str
    source_device: str
    arrival_time: float = 0.0


class ScenarioDoc(_Doc):
    description: str = ""
    requester: Optional[str] = None
    devices: List[DeviceDoc]
    modules: List[ModuleDoc]
    models: List[ModelDoc]
    compute: ComputeDoc = Field(default_factory=ComputeDoc)
    network: NetworkDoc = Field(default_factory=NetworkDoc)
    trace: List[RequestDoc] = Field(default_factory=list)
    capacity: Dict[str, Dict[str, int]] = Field(default_factory=dict)


def _schema_message(error: ValidationError) -> str:
    parts = []
    for item in error.errors()[:5]:
        where = ".".join(str(p) for p in item["loc"]) or "<document>"
        parts.append(f"{where}: {item['msg']}")
    return "Invalid scenario document: " + "; ".join(parts)


def _expand_compute(doc: ScenarioDoc) -> ComputeProfile:
    entries: Dict[str, Dict[str, ComputeEntry]] = {}
    derived = doc.compute.derived
    if derived is not None:
        for fk, work in derived.work.items():
            skipped = set(derived.exclude.get(fk, []))
            for device_id, speed in derived.speed.items():
                if device_id in skipped:
                    continue
                entries.setdefault(fk, {})[device_id] = ComputeEntry(
                    comp_time=work / speed,
                    load_time=derived.load_work.get(fk, 0.0) / speed,
                )
    for fk, per_device in doc.compute.entries.items():
        for device_id, entry in per_device.items():
            entries.setdefault(fk, {})[device_id] = ComputeEntry(**entry.model_dump())
    return ComputeProfile(entries=entries)


def _expand_network(doc: ScenarioDoc) -> NetworkProfile:
    explicit = {(src, dst): link for src, per_dst in doc.network.links.items() for dst, link in per_dst.items()}
    links: Dict[str, Dict[str, Link]] = {}

    def put(src: str, dst: str, link: LinkDoc) -> None:
        if src != dst:
            links.setdefault(src, {})[dst] = Link(**link.model_dump())

    if doc.network.default is not None:
        ids = [d.device_id for d in doc.devices]
        for src in ids:
            for dst in ids:
                put(src, dst, doc.network.default)
    if doc.network.symmetric:
        for (src, dst), link in explicit.items():
            if (dst, src) not in explicit:
                put(dst, src, link)
    for (src, dst), link in explicit.items():
        put(src, dst, link)
    return NetworkProfile(links=links)


def _to_scenario(doc: ScenarioDoc) -> Scenario:
    return Scenario(
        description=doc.description,
        requester=doc.requester,
        devices=[DeviceSpec(**d.model_dump()) for d in doc.devices],
        modules=[ModuleSpec(**m.model_dump()) for m in doc.modules],
        models=[ModelSpec(**k.model_dump()) for k in doc.models],
        compute=_expand_compute(doc),
        network=_expand_network(doc),
        trace=[Request(**q.model_dump()) for q in doc.trace],
        capacity=doc.capacity,
    )


def parse_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioSyntaxException(f"Malformed scenario document: {e.msg}", e.lineno, e.colno)
    if not isinstance(data, dict):
        raise ScenarioSchemaException("Scenario document must be a JSON object")

    try:
        scenario = _to_scenario(ScenarioDoc.model_validate(data))
    except ValidationError as e:
        raise ScenarioSchemaException(_schema_message(e))

    violations = validate_scenario(scenario)
    dangling = [v for v in violations if v.kind == DANGLING]
    if dangling:
        raise ScenarioReferenceException("; ".join(v.message for v in dangling), violations)
    if violations:
        raise ScenarioValidationException(violations)
    return scenario


def scenario_document(s: Scenario) -> Dict[str, Any]:
    """Explicit form: no sugar, every compute entry and link spelled out."""
    data = s.model_dump(mode="json")
    data["compute"] = {"entries": data["compute"]["entries"]}
    data["network"] = {"links": data["network"]["links"]}
    if data["requester"] is None:
        del data["requester"]
    for module in data["modules"]:
        if module["modality"] is None:
            del module["modality"]
    return data


def emit_scenario(s: Scenario) -> str:
    return json.dumps(scenario_document(s), indent=2) + "\n"


def fingerprint(s: Union[Scenario, str]) -> str:
    text = emit_scenario(s) if isinstance(s, Scenario) else s
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
