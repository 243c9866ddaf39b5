# tests/test_validation.py
import pytest
from pydantic import ValidationError

from modshare.domain.exceptions.exception import ScenarioValidationException
from modshare.domain.models.placement import Placement
from modshare.domain.models.scenario import ModuleSpec
from modshare.domain.services.placement import greedy_place
from modshare.domain.services.sharing import build_shared_catalog
from modshare.domain.services.validation import (
    DANGLING,
    check_placement_links,
    placement_link_violations,
    validate_scenario,
)
from tests.factories import HEAD, TEXT, VISION, parsed, raw


def kinds(violations):
    return [v.kind for v in violations]


class TestValidateScenario:
    def test_bundled_scenarios_are_valid(self, bundled):
        for name in ["clip-vitb16-testbed", "multitask-4", "clip-variants", "imagebind"]:
            assert validate_scenario(bundled(name)) == [], name

    def test_function_key_conflict_reported_once(self, doc):
        doc["modules"].append({
            "module_id": "vision-88", "function_key": VISION, "kind": "encoder", "modality": "vision",
            "memory_req": 88_000_000, "input_size": 150528, "output_size": 2048,
        })
        doc["modules"].append({
            "module_id": "vision-90", "function_key": VISION, "kind": "encoder", "modality": "vision",
            "memory_req": 90_000_000, "input_size": 150528, "output_size": 2048,
        })

        violations = validate_scenario(raw(doc))

        assert kinds(violations) == ["FunctionKeyConflict"]
        assert violations[0].subject_id == VISION

    def test_duplicate_modality(self, doc):
        doc["modules"][1]["modality"] = "vision"

        assert kinds(validate_scenario(raw(doc))) == ["DuplicateModality"]

    def test_duplicate_ids(self, doc):
        doc["devices"].append({"device_id": "A", "memory_capacity": 5})
        doc["trace"].append(dict(doc["trace"][0]))

        violations = validate_scenario(raw(doc))

        assert ("device", "A") in [(v.subject_type, v.subject_id) for v in violations]
        assert ("request", "q0") in [(v.subject_type, v.subject_id) for v in violations]

    def test_model_structure(self, doc):
        doc["models"].append({"model_id": "empty", "encoder_ids": [], "head_id": "vision"})
        doc["models"].append({"model_id": "swapped", "encoder_ids": ["similarity"], "head_id": "similarity"})

        violations = validate_scenario(raw(doc))

        assert ("EmptyEncoders", "empty") in [(v.kind, v.subject_id) for v in violations]
        assert [v.subject_id for v in violations if v.kind == "WrongModuleKind"] == ["empty", "swapped"]

    def test_dangling_references(self, doc):
        doc["trace"].append({"request_id": "q1", "model_id": "ghost", "source_device": "Z"})
        doc["compute"]["entries"]["unknown-fk"] = {"A": {"comp_time": 1.0}}
        doc["requester"] = "nowhere"

        violations = validate_scenario(raw(doc))
        dangling = [v for v in violations if v.kind == DANGLING]

        assert {v.subject_type for v in dangling} == {"compute", "request", "scenario"}
        assert len([v for v in dangling if v.subject_id == "q1"]) == 2

    def test_links_are_not_required_up_front(self, doc):
        del doc["network"]["links"]["B"]

        assert validate_scenario(raw(doc)) == []

    def test_placement_needs_links_between_its_hosts(self, doc):
        del doc["network"]["links"]["B"]
        s = raw(doc)

        violations = placement_link_violations(s, Placement(assign={VISION: ["A"], TEXT: ["B"], HEAD: ["A"]}))

        assert kinds(violations) == ["MissingLink"]
        assert violations[0].subject_id == "B->A"
        with pytest.raises(ScenarioValidationException, match="no link from 'B' to 'A'"):
            check_placement_links(s, Placement(assign={VISION: ["A"], TEXT: ["B"], HEAD: ["A"]}))

    def test_unreachable_spare_device_is_fine_when_unused(self, doc):
        doc["devices"].append({"device_id": "C", "memory_capacity": 100_000_000})
        doc["compute"]["entries"][TEXT]["C"] = {"comp_time": 5.0}
        s = parsed(doc)
        placement, _ = greedy_place(s, build_shared_catalog(s))

        assert placement.modules_on("C") == []
        assert placement_link_violations(s, placement) == []
        assert placement_link_violations(s, Placement(assign={VISION: ["A"], TEXT: ["C"], HEAD: ["A"]})) != []

    def test_capacity_checks(self, doc):
        doc["compute"]["entries"][HEAD].pop("B")
        doc["capacity"] = {HEAD: {"B": 2}, TEXT: {"A": 0}}

        violations = validate_scenario(raw(doc))

        assert sorted(kinds(violations)) == ["CapacityNotHostable", "InvalidCapacity"]

    def test_violations_are_sorted(self, doc):
        doc["trace"].append({"request_id": "q1", "model_id": "ghost", "source_device": "A"})
        doc["modules"][1]["modality"] = "vision"

        violations = validate_scenario(raw(doc))

        assert violations == sorted(violations, key=lambda v: v.sort_key())
        assert [v.subject_type for v in violations] == ["model", "request"]


class TestModuleSpec:
    def test_encoder_needs_modality(self):
        with pytest.raises(ValidationError):
            ModuleSpec(module_id="e", function_key="e", kind="encoder", memory_req=1, output_size=1)

    def test_head_has_no_modality(self):
        with pytest.raises(ValidationError):
            ModuleSpec(module_id="h", function_key="h", kind="head", modality="text", memory_req=1, output_size=1)

    def test_negative_memory_rejected(self):
        with pytest.raises(ValidationError):
            ModuleSpec(module_id="h", function_key="h", kind="head", memory_req=-1, output_size=1)
