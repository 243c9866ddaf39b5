# tests/test_scenario.py
import json

import pytest

from modshare.domain.exceptions.exception import (
    ScenarioException,
    ScenarioReferenceException,
    ScenarioSchemaException,
    ScenarioSyntaxException,
    ScenarioValidationException,
)
from modshare.domain.models.common import DeviceTier, format_params, parse_param_count, saving_percent
from modshare.domain.models.placement import Placement
from modshare.domain.models.scenario import Request
from modshare.domain.services.network_cost import transfer_time
from modshare.domain.services.validation import DANGLING
from modshare.infrastructure.storage.json_repository import JsonScenarioRepository
from modshare.infrastructure.storage.scenario_codec import emit_scenario, fingerprint, parse_scenario
from tests.factories import HEAD, TEXT, VISION, parsed

BUNDLED = [
    "clip-resnet50",
    "clip-variants",
    "clip-vitb16-testbed",
    "encoder-vqa",
    "imagebind",
    "multitask-4",
]


def minimal_document():
    return {
        "devices": [{"device_id": "solo", "memory_capacity": "1M"}],
        "modules": [
            {"module_id": "enc", "function_key": "enc", "kind": "encoder", "modality": "vision",
             "memory_req": "10K", "output_size": 16},
            {"module_id": "head", "function_key": "head", "kind": "head", "memory_req": 0, "output_size": 1},
        ],
        "models": [{"model_id": "m", "encoder_ids": ["enc"], "head_id": "head"}],
    }


class TestParamCounts:
    @pytest.mark.parametrize("text, expected", [
        ("86M", 86_000_000),
        ("52K", 52_000),
        ("1.025B", 1_025_000_000),
        ("1_000", 1000),
        (38_000_000, 38_000_000),
        (2.0e6, 2_000_000),
    ])
    def test_parses_suffixes(self, text, expected):
        assert parse_param_count(text) == expected

    @pytest.mark.parametrize("bad", ["1.5", "lots", 0.5, True])
    def test_rejects_fractional_or_garbage(self, bad):
        with pytest.raises(ValueError):
            parse_param_count(bad)

    def test_format_matches_table_style(self):
        assert format_params(1_000_000_000) == "1.0B"
        assert format_params(124_001_000) == "124M"
        assert format_params(52_000) == "52K"
        assert format_params(999) == "999"

    def test_saving_percent_rounds_half_up(self):
        assert saving_percent(209_053_000, 543_053_000) == 61.5
        assert saving_percent(86, 124, places=0) == 31.0
        assert saving_percent(304, 389, places=0) == 22.0
        assert saving_percent(5, 0) == 0.0


class TestParseScenario:
    def test_minimal_document(self):
        s = parse_scenario(json.dumps(minimal_document()))

        assert len(s.devices) == 1
        assert len(s.modules) == 2
        assert s.trace == []
        assert s.devices[0].memory_capacity == 1_000_000
        assert s.devices[0].compute_slots == 1
        assert s.devices[0].uplink_serialized is True

    def test_bundled_testbed(self, bundled):
        s = bundled("clip-vitb16-testbed")

        assert s.device_ids() == ["server", "desktop", "laptop", "jetson-a", "jetson-b"]
        assert s.device("server").tier == DeviceTier.cloud
        assert [d.device_id for d in s.edge_devices()] == ["desktop", "laptop", "jetson-a", "jetson-b"]
        assert [d.device_id for d in s.cloud_devices()] == ["server"]
        assert s.module("vision").memory_req == 86_000_000
        assert s.requester == "jetson-a"

    def test_unknown_head_is_a_reference_error(self):
        doc = minimal_document()
        doc["models"][0]["head_id"] = "nope"

        with pytest.raises(ScenarioReferenceException) as info:
            parse_scenario(json.dumps(doc))
        assert "nope" in str(info.value)
        assert [v.kind for v in info.value.violations] == [DANGLING]

    def test_malformed_json_reports_position(self):
        with pytest.raises(ScenarioSyntaxException) as info:
            parse_scenario('{\n  "devices": [\n}')
        assert info.value.line == 3
        assert "line 3" in str(info.value)

    def test_unknown_field_is_rejected(self):
        doc = minimal_document()
        doc["devices"][0]["colour"] = "red"

        with pytest.raises(ScenarioSchemaException):
            parse_scenario(json.dumps(doc))

    def test_missing_required_section(self):
        doc = minimal_document()
        del doc["models"]

        with pytest.raises(ScenarioSchemaException) as info:
            parse_scenario(json.dumps(doc))
        assert "models" in str(info.value)

    def test_top_level_must_be_object(self):
        with pytest.raises(ScenarioSchemaException):
            parse_scenario("[1, 2]")

    def test_invariant_breach_is_a_validation_error(self, doc):
        doc["modules"][1]["modality"] = "vision"

        with pytest.raises(ScenarioValidationException) as info:
            parsed(doc)
        assert any(v.kind == "DuplicateModality" for v in info.value.violations)


class TestSugar:
    def test_derived_compute_with_exclusions(self, bundled):
        s = bundled("clip-variants")

        assert s.compute.comp_time("rn50-vision", "desktop") == pytest.approx(1.5 / 0.45)
        assert s.compute.load_time("rn50-vision", "server") == pytest.approx(4.1)
        assert s.compute.comp_time("rn50x64-vision", "jetson-a") is None
        assert s.compute.comp_time("rn50-vision", "jetson-a") == pytest.approx(1.5 / 0.12)

    def test_explicit_entries_override_derived(self):
        doc = minimal_document()
        doc["compute"] = {
            "derived": {"work": {"enc": 2.0, "head": 0.1}, "speed": {"solo": 0.5}},
            "entries": {"enc": {"solo": {"comp_time": 1.25}}},
        }
        s = parse_scenario(json.dumps(doc))

        assert s.compute.comp_time("enc", "solo") == 1.25
        assert s.compute.comp_time("head", "solo") == pytest.approx(0.2)

    def test_default_and_symmetric_links(self, bundled):
        s = bundled("clip-vitb16-testbed")

        assert s.network.link("server", "laptop").latency == 0.0045
        assert s.network.link("laptop", "server").latency == 0.0045
        assert s.network.link("jetson-a", "desktop").latency == 0.002
        assert s.network.link("desktop", "desktop") is None
        assert transfer_time(s.network, "desktop", "desktop", 10**9) == 0.0


class TestEmit:
    def test_bundled_scenarios_survive_emit_and_parse(self, bundled):
        for name in BUNDLED:
            s = bundled(name)
            assert parse_scenario(emit_scenario(s)) == s, name

    def test_emitted_form_is_explicit(self, bundled):
        data = json.loads(emit_scenario(bundled("clip-variants")))

        assert set(data["compute"]) == {"entries"}
        assert set(data["network"]) == {"links"}
        assert "modality" not in data["modules"][-1]

    def test_fingerprint_is_stable(self, bundled):
        s = bundled("imagebind")

        assert fingerprint(s) == fingerprint(parse_scenario(emit_scenario(s)))
        assert fingerprint(s) != fingerprint(bundled("clip-resnet50"))
        assert len(fingerprint(s)) == 64


class TestScenarioHelpers:
    def test_ordered_trace_is_stable(self, scenario):
        trace = [
            Request(request_id="late", model_id="clip", source_device="A", arrival_time=2.0),
            Request(request_id="first", model_id="clip", source_device="B", arrival_time=0.0),
            Request(request_id="second", model_id="clip", source_device="A", arrival_time=0.0),
        ]
        ordered = scenario.with_trace(trace).ordered_trace()

        assert [q.request_id for q in ordered] == ["first", "second", "late"]

    def test_restrict_devices_drops_everything_attached(self, bundled):
        s = bundled("clip-vitb16-testbed").restrict_devices(["desktop", "laptop"])

        assert s.device_ids() == ["desktop", "laptop"]
        assert s.compute.hosts(VISION) == ["desktop", "laptop"]
        assert s.network.link("desktop", "server") is None
        assert s.trace == []
        assert s.requester is None

    def test_restrict_models(self, bundled):
        s = bundled("multitask-4").restrict_models(["classification"])

        assert [m.function_key for m in s.modules] == [VISION, "food-classifier"]
        assert [q.model_id for q in s.trace] == ["classification"]
        assert TEXT not in s.compute.entries

    def test_effective_requester_falls_back(self, scenario, bundled):
        assert bundled("imagebind").effective_requester() == "jetson-a"
        assert scenario.effective_requester() == "A"
        assert scenario.with_trace([]).effective_requester() == "A"

    def test_model_modules(self, scenario):
        encoders, head = scenario.model_modules("clip")

        assert [m.function_key for m in encoders] == [VISION, TEXT]
        assert head.function_key == HEAD


class TestRepository:
    def test_bundled_listing(self):
        assert JsonScenarioRepository().list_bundled() == BUNDLED

    def test_resolves_scenario_dir_without_extension(self, repository, scenario, tmp_path):
        repository.save_scenario(scenario, tmp_path / "mine.json")

        assert repository.load_scenario("mine") == scenario
        assert repository.load_scenario(tmp_path / "mine.json") == scenario

    def test_unknown_scenario(self, repository):
        with pytest.raises(ScenarioException, match="not found") as info:
            repository.load_scenario("no-such-scenario")
        assert "clip-variants, clip-vitb16-testbed" in str(info.value)

    def test_placement_files(self, repository, tmp_path):
        placement = Placement(assign={VISION: ["A"], TEXT: ["B"]}, residual_memory={"A": 1, "B": 2})
        path = repository.save_placement(placement, tmp_path / "out" / "p.json")

        assert repository.load_placement(path) == placement

    def test_broken_placement_files(self, repository, tmp_path):
        (tmp_path / "bad.json").write_text("{", encoding="utf-8")
        (tmp_path / "wrong.json").write_text('{"assign": 3}', encoding="utf-8")

        with pytest.raises(ScenarioSyntaxException):
            repository.load_placement(tmp_path / "bad.json")
        with pytest.raises(ScenarioSchemaException):
            repository.load_placement(tmp_path / "wrong.json")
        with pytest.raises(ScenarioException):
            repository.load_placement(tmp_path / "missing.json")
