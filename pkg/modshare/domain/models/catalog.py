# modshare/domain/models/catalog.py
from typing import Dict, List

from pydantic import BaseModel

from modshare.domain.models.common import format_params, saving_percent
from modshare.domain.models.scenario import ModuleSpec


class Violation(BaseModel):
    kind: str
    subject_type: str
    subject_id: str
    message: str

    def sort_key(self):
        return (self.subject_type, self.subject_id, self.kind, self.message)


class SharedCatalog(BaseModel):
    distinct_modules: List[ModuleSpec]
    # function_key -> model ids in scenario order
    owners: Dict[str, List[str]]

    @property
    def c(self) -> int:
        return len(self.distinct_modules)

    def get(self, function_key: str) -> ModuleSpec:
        for module in self.distinct_modules:
            if module.function_key == function_key:
                return module
        raise KeyError(function_key)

    def function_keys(self) -> List[str]:
        return [m.function_key for m in self.distinct_modules]


class ModelMemory(BaseModel):
    model_id: str
    monolithic: int
    split_max: int
    split_saving: float
    # running totals after adding this model, in scenario order
    no_share_cumulative: int
    shared_cumulative: int


class MemoryReport(BaseModel):
    models: List[ModelMemory]
    no_share_total: int
    shared_total: int
    share_saving: float

    def rows(self) -> List[Dict[str, object]]:
        """Cumulative table: task, no-share, shared, delta, saving."""
        out = []
        previous = 0
        for entry in self.models:
            out.append({
                "model": entry.model_id,
                "no_share": format_params(entry.no_share_cumulative),
                "shared": format_params(entry.shared_cumulative),
                "delta": f"+{format_params(entry.shared_cumulative - previous)}",
                "saving": f"{saving_percent(entry.shared_cumulative, entry.no_share_cumulative)}%",
            })
            previous = entry.shared_cumulative
        return out
