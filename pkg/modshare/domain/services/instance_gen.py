# modshare/domain/services/instance_gen.py
import logging
import math
from typing import Dict, List, Optional

import numpy as np

from modshare.domain.exceptions.exception import GenerationFailedException, InfeasibleException
from modshare.domain.models.common import ModuleKind
from modshare.domain.models.instance import FloatRange, GenParams, IntRange
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
from modshare.domain.services.placement import greedy_place
from modshare.domain.services.sharing import build_shared_catalog
from modshare.domain.services.validation import validate_scenario

logger = logging.getLogger(__name__)

MODALITIES = ["vision", "text", "audio", "depth", "thermal", "imu"]

BASE_MEMORY = 20_000_000
# parameters processed per second on the fastest device
BASE_THROUGHPUT = 40_000_000


def generate(params: GenParams) -> Scenario:
    """Draw a scenario for the seed; retries until it validates and greedy placement succeeds."""
    rng = np.random.default_rng(params.seed)
    for attempt in range(params.max_retries):
        scenario = _draw(rng, params)
        if validate_scenario(scenario):
            continue
        catalog = build_shared_catalog(scenario)
        if params.n_modules is not None and not params.n_modules.low <= catalog.c <= params.n_modules.high:
            continue
        try:
            greedy_place(scenario, catalog)
        except InfeasibleException:
            continue
        logger.debug("Seed %d accepted after %d attempts", params.seed, attempt + 1)
        return scenario
    raise GenerationFailedException(f"No feasible instance for seed {params.seed} after {params.max_retries} attempts")


def _int_in(rng: np.random.Generator, r: IntRange) -> int:
    return int(rng.integers(r.low, r.high + 1))


def _float_in(rng: np.random.Generator, r: FloatRange) -> float:
    return float(rng.uniform(r.low, r.high))


def _log_uniform(rng: np.random.Generator, r: FloatRange) -> float:
    return float(math.exp(rng.uniform(math.log(r.low), math.log(r.high))))


def _draw(rng: np.random.Generator, params: GenParams) -> Scenario:
    n_devices = _int_in(rng, params.n_devices)
    heterogeneity = _float_in(rng, params.heterogeneity)
    # slowness relative to the fastest device; the rest sit between H**0.35 and H
    slowness = [1.0] + [float(heterogeneity ** rng.uniform(0.35, 1.0)) for _ in range(n_devices - 1)]
    slowness = [slowness[i] for i in rng.permutation(n_devices)]
    device_ids = [f"dev{i}" for i in range(n_devices)]
    fastest = device_ids[int(np.argmin(slowness))]

    modules: List[ModuleSpec] = []
    models: List[ModelSpec] = []
    entries: Dict[str, Dict[str, ComputeEntry]] = {}
    by_modality: Dict[str, ModuleSpec] = {}

    def add_profile(fk: str, work: float, optional: bool) -> None:
        per_device = {}
        for device_id, slow in zip(device_ids, slowness):
            if optional and device_id != fastest and rng.random() < params.infeasible_probability:
                continue
            comp = work * slow * float(rng.uniform(0.9, 1.1))
            per_device[device_id] = ComputeEntry(comp_time=comp, load_time=comp * float(rng.uniform(1.0, 4.0)))
        entries[fk] = per_device

    for k in range(_int_in(rng, params.n_models)):
        model_id = f"model{k}"
        n_enc = min(_int_in(rng, params.encoders_per_model), len(MODALITIES))
        encoder_ids = []
        for modality in rng.choice(MODALITIES, size=n_enc, replace=False):
            modality = str(modality)
            reused: Optional[ModuleSpec] = by_modality.get(modality)
            if reused is not None and rng.random() < params.share_probability:
                module = reused.model_copy(update={"module_id": f"{modality}-{model_id}"})
            else:
                memory = int(round(BASE_MEMORY * _log_uniform(rng, params.memory_spread)))
                fk = f"{modality}-enc{len(entries)}"
                module = ModuleSpec(
                    module_id=f"{modality}-{model_id}",
                    function_key=fk,
                    kind=ModuleKind.encoder,
                    modality=modality,
                    memory_req=memory,
                    output_size=0.0 if params.zero_comm else float(rng.integers(512, 4097)),
                    input_size=0.0 if params.zero_comm else float(rng.integers(10_000, 200_001)),
                )
                add_profile(fk, memory / BASE_THROUGHPUT * float(rng.uniform(0.8, 1.25)), optional=True)
                by_modality[modality] = module
            modules.append(module)
            encoder_ids.append(module.module_id)

        head_fk = f"head{k}"
        modules.append(ModuleSpec(
            module_id=f"head-{model_id}",
            function_key=head_fk,
            kind=ModuleKind.head,
            memory_req=int(rng.integers(0, 100_001)),
            output_size=0.0 if params.zero_comm else 16.0,
        ))
        add_profile(head_fk, float(rng.uniform(0.01, 0.05)), optional=False)
        models.append(ModelSpec(model_id=model_id, encoder_ids=encoder_ids, head_id=f"head-{model_id}"))

    largest = max(m.memory_req for m in modules)
    devices = [
        DeviceSpec(
            device_id=device_id,
            memory_capacity=int(largest * _float_in(rng, params.capacity_slack)),
            uplink_serialized=params.uplink_serialized,
        )
        for device_id in device_ids
    ]

    links: Dict[str, Dict[str, Link]] = {}
    for src in device_ids:
        for dst in device_ids:
            if src == dst:
                continue
            if params.zero_comm:
                link = Link(latency=0.0, bandwidth=1e8)
            else:
                link = Link(latency=float(rng.uniform(0.001, 0.005)), bandwidth=float(rng.uniform(1e7, 1e8)))
            links.setdefault(src, {})[dst] = link

    trace = []
    for model in models:
        for _ in range(_int_in(rng, params.requests_per_model)):
            trace.append(Request(
                request_id=f"q{len(trace)}",
                model_id=model.model_id,
                source_device=device_ids[int(rng.integers(0, n_devices))],
            ))

    return Scenario(
        description=f"generated instance, seed {params.seed}",
        devices=devices,
        modules=modules,
        models=models,
        compute=ComputeProfile(entries=entries),
        network=NetworkProfile(links=links),
        trace=trace,
    )
