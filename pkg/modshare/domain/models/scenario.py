# modshare/domain/models/scenario.py
from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from modshare.domain.models.common import DeviceTier, ModuleKind


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class DeviceSpec(FrozenModel):
    device_id: str
    memory_capacity: int = Field(ge=0)
    compute_slots: int = Field(default=1, ge=1)
    uplink_serialized: bool = True
    tier: DeviceTier = DeviceTier.edge


class ModuleSpec(FrozenModel):
    module_id: str
    function_key: str
    kind: ModuleKind
    modality: Optional[str] = None
    memory_req: int = Field(ge=0)
    output_size: float = Field(ge=0, allow_inf_nan=False)
    input_size: float = Field(default=0.0, ge=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _modality_matches_kind(self) -> "ModuleSpec":
        if self.kind == ModuleKind.encoder and not self.modality:
            raise ValueError(f"encoder '{self.module_id}' needs a modality")
        if self.kind == ModuleKind.head and self.modality is not None:
            raise ValueError(f"head '{self.module_id}' cannot declare a modality")
        return self

    @property
    def is_encoder(self) -> bool:
        return self.kind == ModuleKind.encoder

    def identity(self) -> Tuple:
        """What two modules sharing a function key must agree on."""
        return (self.kind, self.modality, self.memory_req, self.output_size)


class ComputeEntry(FrozenModel):
    comp_time: float = Field(gt=0, allow_inf_nan=False)
    load_time: float = Field(default=0.0, ge=0, allow_inf_nan=False)


class ComputeProfile(FrozenModel):
    # function_key -> device_id -> entry; a missing entry means the device cannot host it
    entries: Dict[str, Dict[str, ComputeEntry]] = Field(default_factory=dict)

    def lookup(self, function_key: str, device_id: str) -> Optional[ComputeEntry]:
        return self.entries.get(function_key, {}).get(device_id)

    def comp_time(self, function_key: str, device_id: str) -> Optional[float]:
        entry = self.lookup(function_key, device_id)
        return None if entry is None else entry.comp_time

    def load_time(self, function_key: str, device_id: str) -> float:
        entry = self.lookup(function_key, device_id)
        return 0.0 if entry is None else entry.load_time

    def hosts(self, function_key: str) -> List[str]:
        return list(self.entries.get(function_key, {}))


class Link(FrozenModel):
    latency: float = Field(ge=0, allow_inf_nan=False)
    bandwidth: float = Field(gt=0)


class NetworkProfile(FrozenModel):
    # src -> dst -> link
    links: Dict[str, Dict[str, Link]] = Field(default_factory=dict)

    def link(self, src: str, dst: str) -> Optional[Link]:
        return self.links.get(src, {}).get(dst)


class ModelSpec(FrozenModel):
    model_id: str
    encoder_ids: List[str]
    head_id: str


class Request(FrozenModel):
    request_id: str
    model_id: str
    source_device: str
    arrival_time: float = Field(default=0.0, ge=0, allow_inf_nan=False)


class Scenario(FrozenModel):
    description: str = ""
    devices: List[DeviceSpec]
    modules: List[ModuleSpec]
    models: List[ModelSpec]
    compute: ComputeProfile = Field(default_factory=ComputeProfile)
    network: NetworkProfile = Field(default_factory=NetworkProfile)
    trace: List[Request] = Field(default_factory=list)
    # function_key -> device_id -> request cap; absent means unlimited
    capacity: Dict[str, Dict[str, int]] = Field(default_factory=dict)
    requester: Optional[str] = None

    def device_ids(self) -> List[str]:
        return [d.device_id for d in self.devices]

    def device(self, device_id: str) -> Optional[DeviceSpec]:
        return next((d for d in self.devices if d.device_id == device_id), None)

    def device_index(self, device_id: str) -> int:
        for i, d in enumerate(self.devices):
            if d.device_id == device_id:
                return i
        return len(self.devices)

    def module(self, module_id: str) -> Optional[ModuleSpec]:
        return next((m for m in self.modules if m.module_id == module_id), None)

    def model(self, model_id: str) -> Optional[ModelSpec]:
        return next((k for k in self.models if k.model_id == model_id), None)

    def model_modules(self, model_id: str) -> Tuple[List[ModuleSpec], ModuleSpec]:
        """Encoders (model order) and head of a model; assumes references resolve."""
        model = self.model(model_id)
        by_id = {m.module_id: m for m in self.modules}
        return [by_id[i] for i in model.encoder_ids], by_id[model.head_id]

    def capacity_of(self, function_key: str, device_id: str) -> Optional[int]:
        return self.capacity.get(function_key, {}).get(device_id)

    def effective_requester(self) -> Optional[str]:
        if self.requester is not None:
            return self.requester
        if self.trace:
            return self.trace[0].source_device
        return self.devices[0].device_id if self.devices else None

    def edge_devices(self) -> List[DeviceSpec]:
        return [d for d in self.devices if d.tier == DeviceTier.edge]

    def cloud_devices(self) -> List[DeviceSpec]:
        return [d for d in self.devices if d.tier == DeviceTier.cloud]

    def ordered_trace(self) -> List[Request]:
        """Trace in arrival order; equal arrivals keep file order."""
        ranked = sorted(enumerate(self.trace), key=lambda item: (item[1].arrival_time, item[0]))
        return [request for _, request in ranked]

    def restrict_devices(self, device_ids: Iterable[str]) -> "Scenario":
        keep = set(device_ids)
        devices = [d for d in self.devices if d.device_id in keep]
        compute = {
            fk: {dev: e for dev, e in per_device.items() if dev in keep}
            for fk, per_device in self.compute.entries.items()
        }
        links = {
            src: {dst: link for dst, link in per_dst.items() if dst in keep}
            for src, per_dst in self.network.links.items() if src in keep
        }
        capacity = {
            fk: {dev: cap for dev, cap in per_device.items() if dev in keep}
            for fk, per_device in self.capacity.items()
        }
        requester = self.requester if self.requester in keep else None
        return self.model_copy(update={
            "devices": devices,
            "compute": ComputeProfile(entries={fk: e for fk, e in compute.items() if e}),
            "network": NetworkProfile(links={src: d for src, d in links.items() if d}),
            "capacity": {fk: c for fk, c in capacity.items() if c},
            "trace": [q for q in self.trace if q.source_device in keep],
            "requester": requester,
        })

    def restrict_models(self, model_ids: Iterable[str]) -> "Scenario":
        keep = set(model_ids)
        models = [k for k in self.models if k.model_id in keep]
        used = {i for k in models for i in (*k.encoder_ids, k.head_id)}
        modules = [m for m in self.modules if m.module_id in used]
        keys = {m.function_key for m in modules}
        return self.model_copy(update={
            "models": models,
            "modules": modules,
            "compute": ComputeProfile(entries={fk: e for fk, e in self.compute.entries.items() if fk in keys}),
            "capacity": {fk: c for fk, c in self.capacity.items() if fk in keys},
            "trace": [q for q in self.trace if q.model_id in keep],
        })

    def with_trace(self, trace: List[Request]) -> "Scenario":
        return self.model_copy(update={"trace": list(trace)})
