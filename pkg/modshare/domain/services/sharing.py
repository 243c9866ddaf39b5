# modshare/domain/services/sharing.py
import logging
from typing import Dict, List

from modshare.domain.exceptions.exception import FunctionKeyConflictException
from modshare.domain.models.catalog import MemoryReport, ModelMemory, SharedCatalog
from modshare.domain.models.common import saving_percent
from modshare.domain.models.scenario import ComputeProfile, ModelSpec, ModuleSpec, Scenario

logger = logging.getLogger(__name__)


def build_shared_catalog(s: Scenario) -> SharedCatalog:
    """One module per function key, in first-use order over the models (encoders, then head)."""
    by_id = {m.module_id: m for m in s.modules}
    distinct: Dict[str, ModuleSpec] = {}
    owners: Dict[str, List[str]] = {}
    for model in s.models:
        for module_id in [*model.encoder_ids, model.head_id]:
            module = by_id[module_id]
            fk = module.function_key
            known = distinct.setdefault(fk, module)
            if known.identity() != module.identity():
                raise FunctionKeyConflictException(fk)
            model_owners = owners.setdefault(fk, [])
            if model.model_id not in model_owners:
                model_owners.append(model.model_id)
    catalog = SharedCatalog(distinct_modules=list(distinct.values()), owners=owners)
    logger.debug("Shared catalog: %d distinct modules across %d models", catalog.c, len(s.models))
    return catalog


def memory_accounting(s: Scenario, catalog: SharedCatalog) -> MemoryReport:
    rows = []
    no_share = 0
    seen: Dict[str, int] = {}
    for model in s.models:
        encoders, head = s.model_modules(model.model_id)
        sizes = [m.memory_req for m in (*encoders, head)]
        monolithic = sum(sizes)
        split_max = max(sizes)
        no_share += monolithic
        for m in (*encoders, head):
            seen.setdefault(m.function_key, catalog.get(m.function_key).memory_req)
        rows.append(ModelMemory(
            model_id=model.model_id,
            monolithic=monolithic,
            split_max=split_max,
            split_saving=saving_percent(split_max, monolithic),
            no_share_cumulative=no_share,
            shared_cumulative=sum(seen.values()),
        ))
    shared = sum(m.memory_req for m in catalog.distinct_modules)
    return MemoryReport(
        models=rows,
        no_share_total=no_share,
        shared_total=shared,
        share_saving=saving_percent(shared, no_share),
    )


def private_key(function_key: str, model_id: str) -> str:
    return f"{function_key}@{model_id}"


def unshare(s: Scenario) -> Scenario:
    """Every model gets its own copy of each module, so nothing is shared."""
    by_id = {m.module_id: m for m in s.modules}
    modules: List[ModuleSpec] = []
    models: List[ModelSpec] = []
    entries = {}
    capacity = {}
    for model in s.models:
        renamed = {}
        for module_id in [*model.encoder_ids, model.head_id]:
            module = by_id[module_id]
            fk = private_key(module.function_key, model.model_id)
            copy = module.model_copy(update={
                "module_id": f"{module.module_id}@{model.model_id}",
                "function_key": fk,
            })
            modules.append(copy)
            renamed[module_id] = copy.module_id
            if module.function_key in s.compute.entries:
                entries[fk] = dict(s.compute.entries[module.function_key])
            if module.function_key in s.capacity:
                capacity[fk] = dict(s.capacity[module.function_key])
        models.append(ModelSpec(
            model_id=model.model_id,
            encoder_ids=[renamed[i] for i in model.encoder_ids],
            head_id=renamed[model.head_id],
        ))
    return s.model_copy(update={
        "modules": modules,
        "models": models,
        "compute": ComputeProfile(entries=entries),
        "capacity": capacity,
    })
