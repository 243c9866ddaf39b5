# modshare/domain/models/placement.py
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class Placement(BaseModel):
    # function_key -> hosting devices, in scenario device order
    assign: Dict[str, List[str]] = Field(default_factory=dict)
    residual_memory: Dict[str, int] = Field(default_factory=dict)

    def hosts(self, function_key: str) -> List[str]:
        return self.assign.get(function_key, [])

    def modules_on(self, device_id: str) -> List[str]:
        return [fk for fk, devices in self.assign.items() if device_id in devices]

    def is_placed(self, function_key: str) -> bool:
        return bool(self.assign.get(function_key))


class CandidateScore(BaseModel):
    device_id: str
    # None when the device cannot execute the module
    t_place: Optional[float]


class PlacementStep(BaseModel):
    function_key: str
    memory_req: int
    candidates: List[CandidateScore]
    chosen: Optional[str]


class PlacementTrace(BaseModel):
    steps: List[PlacementStep] = Field(default_factory=list)

    def log_lines(self) -> List[str]:
        lines = []
        for i, step in enumerate(self.steps, start=1):
            ranked = ", ".join(
                f"{c.device_id}={c.t_place:.3f}s" if c.t_place is not None else f"{c.device_id}=--"
                for c in step.candidates
            )
            chosen = step.chosen or "INFEASIBLE"
            lines.append(f"{i}. {step.function_key} ({step.memory_req}) -> {chosen}  [{ranked}]")
        return lines
