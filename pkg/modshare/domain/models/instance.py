# modshare/domain/models/instance.py
from typing import Optional

from pydantic import BaseModel, Field, model_validator


class _RangeParsing(BaseModel):
    @model_validator(mode="before")
    @classmethod
    def _from_text(cls, value):
        """'3..5', '4' or a (low, high) pair."""
        if isinstance(value, str):
            low, _, high = value.partition("..")
            return {"low": low.strip(), "high": (high or low).strip()}
        if isinstance(value, (tuple, list)):
            return {"low": value[0], "high": value[1]}
        if isinstance(value, (int, float)):
            return {"low": value, "high": value}
        return value

    @model_validator(mode="after")
    def _non_empty(self):
        if self.low > self.high:
            raise ValueError(f"empty range {self.low}..{self.high}")
        return self

    def __str__(self) -> str:
        return f"{self.low}..{self.high}"


class IntRange(_RangeParsing):
    low: int
    high: int


class FloatRange(_RangeParsing):
    low: float
    high: float


class GenParams(BaseModel):
    seed: int = Field(default=0, ge=0, lt=2**64)
    n_devices: IntRange = IntRange(low=5, high=5)
    n_models: IntRange = IntRange(low=1, high=1)
    encoders_per_model: IntRange = IntRange(low=1, high=3)
    # distinct modules wanted across all models; None accepts whatever the models produce
    n_modules: Optional[IntRange] = IntRange(low=2, high=4)
    requests_per_model: IntRange = IntRange(low=1, high=1)
    # largest over smallest encoder memory
    memory_spread: FloatRange = FloatRange(low=1.0, high=16.0)
    # slowest over fastest device compute time
    heterogeneity: FloatRange = FloatRange(low=10.0, high=20.0)
    # device memory as a multiple of the largest module
    capacity_slack: FloatRange = FloatRange(low=1.0, high=1.5)
    share_probability: float = Field(default=0.5, ge=0.0, le=1.0)
    # chance a device cannot run a given encoder
    infeasible_probability: float = Field(default=0.0, ge=0.0, le=1.0)
    uplink_serialized: bool = True
    zero_comm: bool = False
    max_retries: int = Field(default=100, ge=1)
