# modshare/domain/models/simulation.py
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from modshare.domain.models.common import Pipelining


class EventKind(str, Enum):
    LOAD_START = "LoadStart"
    LOAD_END = "LoadEnd"
    SEND_START = "SendStart"
    SEND_END = "SendEnd"
    ENCODE_START = "EncodeStart"
    ENCODE_END = "EncodeEnd"
    FORWARD_START = "ForwardStart"
    FORWARD_END = "ForwardEnd"
    HEAD_START = "HeadStart"
    HEAD_END = "HeadEnd"


# lifecycle order, used to break ties between events at the same instant
EVENT_RANK = {kind: i for i, kind in enumerate(EventKind)}


class Event(BaseModel):
    time: float
    kind: EventKind
    request_id: str
    function_key: str
    device_id: str
    # the other end of a transfer
    peer: Optional[str] = None


class SimOptions(BaseModel):
    end_to_end: bool = False
    pipelining: Pipelining = Pipelining.fine
    parallel_encoding: bool = True


class RequestMetrics(BaseModel):
    request_id: str
    model_id: str
    arrival: float
    completion: float
    t_enc: float
    t_head: float
    t_total: float
    # compute-slot wait of the last-arriving encoder plus that of the head
    queue_wait: float


class ModuleStats(BaseModel):
    function_key: str
    device_id: str
    executions: int
    busy_time: float
    utilization: float
    mean_queue_length: float


class SimResult(BaseModel):
    timeline: List[Event] = Field(default_factory=list)
    requests: List[RequestMetrics] = Field(default_factory=list)
    makespan: float = 0.0
    modules: List[ModuleStats] = Field(default_factory=list)

    @property
    def mean_total(self) -> float:
        if not self.requests:
            return 0.0
        return sum(r.t_total for r in self.requests) / len(self.requests)

    def request(self, request_id: str) -> RequestMetrics:
        return next(r for r in self.requests if r.request_id == request_id)


class ModeSummary(BaseModel):
    mode: str
    feasible: bool
    mean_total: Optional[float] = None
    makespan: Optional[float] = None
    max_device_memory: int = 0
    total_memory: int = 0


class ComparisonReport(BaseModel):
    modes: List[ModeSummary]

    def mode(self, name: str) -> ModeSummary:
        return next(m for m in self.modes if m.mode == name)


class DeploymentRow(BaseModel):
    model_id: str
    centralized_params: int
    split_max_params: int
    # whole percent, negative means smaller
    delta_percent: int
    cloud_latency: Optional[float] = None
    local_latency: Optional[float] = None
    split_latency: Optional[float] = None
