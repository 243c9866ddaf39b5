# tests/test_cli.py
import json

import pytest
from typer.testing import CliRunner

from modshare import __version__
from modshare.cli.main import app
from modshare.config.settings import settings
from tests.factories import base_document

runner = CliRunner()


@pytest.fixture
def scenario_file(tmp_path):
    def write(doc, name="scenario.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return write


def test_version():
    result = runner.invoke(app, ["version"])

    assert result.exit_code == 0
    assert __version__ in result.output


class TestPlace:
    def test_greedy_writes_placement(self, scenario_file, tmp_path):
        out = tmp_path / "p.json"
        result = runner.invoke(app, ["place", scenario_file(base_document()), "-o", str(out)])

        assert result.exit_code == 0, result.output
        assert "Placement steps" in result.output
        assert "1.604356" in result.output
        assert json.loads(out.read_text())["assign"] == {
            "vit-b16-vision": ["A"], "clip-trf-text": ["B"], "cosine-head": ["A"],
        }

    def test_infeasible_exits_2(self, scenario_file, tmp_path):
        doc = base_document()
        doc["modules"][0]["memory_req"] = 200_000_000
        result = runner.invoke(app, ["place", scenario_file(doc), "-o", str(tmp_path / "p.json")])

        assert result.exit_code == 2
        assert "vit-b16-vision" in result.output
        assert "Placement steps before failing" in result.output
        assert "1. vit-b16-vision (200000000) -> INFEASIBLE" in result.output

    def test_search_space_guard_exits_3(self, scenario_file, tmp_path, monkeypatch):
        monkeypatch.setattr(settings.placement, "brute_force_limit", 1)
        result = runner.invoke(app, ["place", scenario_file(base_document()), "--upper",
                                     "-o", str(tmp_path / "p.json")])

        assert result.exit_code == 3

    def test_json_rows(self, tmp_path):
        result = runner.invoke(app, ["place", "multitask-4", "-f", "json", "-o", str(tmp_path / "p.json")])
        payload = json.loads(result.output)

        assert result.exit_code == 0
        assert len(payload["rows"]) == 7
        assert payload["rows"][0]["owners"] == "retrieval,vqa,alignment,classification"


class TestRoute:
    def test_with_saved_placement(self, scenario_file, tmp_path):
        path = scenario_file(base_document())
        placement = tmp_path / "p.json"
        runner.invoke(app, ["place", path, "-o", str(placement)])

        result = runner.invoke(app, ["route", path, "-p", str(placement), "-f", "csv"])

        assert result.exit_code == 0, result.output
        lines = result.output.strip().splitlines()
        assert lines[0].startswith("request,modality,device")
        assert len(lines) == 3

    def test_oracle_column(self):
        result = runner.invoke(app, ["route", "encoder-vqa", "--auto", "--oracle", "-f", "csv"])

        assert result.exit_code == 0, result.output
        assert result.output.splitlines()[0].endswith(",t_total,oracle_total")


class TestSimulate:
    def test_shared_memory_summary(self):
        result = runner.invoke(app, ["simulate", "multitask-4", "-f", "table"])

        assert result.exit_code == 0, result.output
        assert "209M shared vs 543M without sharing (-61.5%)" in result.output
        assert "(shared): 209M" in result.output

    def test_no_share(self):
        result = runner.invoke(app, ["simulate", "multitask-4", "--no-share", "-f", "table"])

        assert result.exit_code == 0, result.output
        assert "(no-share): 543M" in result.output

    def test_timeline_csv(self, tmp_path):
        out = tmp_path / "timeline.csv"
        result = runner.invoke(app, ["simulate", "clip-vitb16-testbed", "--timeline-csv", str(out), "-f", "csv"])

        assert result.exit_code == 0, result.output
        assert out.read_text().startswith("time,kind,request,module,device,peer")

    def test_gantt(self):
        result = runner.invoke(app, ["simulate", "clip-vitb16-testbed", "--timeline", "--end-to-end"])

        assert result.exit_code == 0, result.output
        assert "legend:" in result.output

    def test_repeat_with_jitter(self):
        result = runner.invoke(app, ["simulate", "multitask-4", "--repeat", "3", "--jitter", "0.1",
                                     "--seed", "4", "-f", "table"])

        assert result.exit_code == 0, result.output
        assert "Over 3 runs" in result.output
        assert "repeats the same run" not in result.output

    def test_repeat_without_jitter_warns(self):
        result = runner.invoke(app, ["simulate", "multitask-4", "--repeat", "2", "-f", "table"])

        assert result.exit_code == 0, result.output
        assert "repeats the same run" in result.output

    def test_no_share_rejects_a_placement_file(self, tmp_path):
        placement = tmp_path / "p.json"
        runner.invoke(app, ["place", "multitask-4", "-o", str(placement)])

        result = runner.invoke(app, ["simulate", "multitask-4", "--no-share", "-p", str(placement)])

        assert result.exit_code == 1
        assert "--no-share" in result.output
        assert "not placed" not in result.output


class TestCompare:
    def test_variant_deltas_as_json(self):
        result = runner.invoke(app, ["compare", "clip-variants", "-f", "json"])
        rows = json.loads(result.output)["rows"]

        assert result.exit_code == 0
        assert [r["delta"] for r in rows] == [-50, -40, -40, -34, -26, -30, -31, -22, -22]

    def test_modes_as_csv(self):
        result = runner.invoke(app, ["compare", "clip-vitb16-testbed", "--modes", "-f", "csv"])

        assert result.exit_code == 0, result.output
        assert "centralized:server" in result.output
        assert result.output.splitlines()[0] == "mode,mean_total,makespan,max_device_memory,total_memory"


class TestValidate:
    def test_valid_bundled(self):
        result = runner.invoke(app, ["validate", "imagebind"])

        assert result.exit_code == 0
        assert "is valid" in result.output

    def test_dangling_reference(self, scenario_file):
        doc = base_document()
        doc["models"][0]["head_id"] = "missing"
        result = runner.invoke(app, ["validate", scenario_file(doc)])

        assert result.exit_code == 1
        assert "missing" in result.output

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{\n", encoding="utf-8")
        result = runner.invoke(app, ["validate", str(path)])

        assert result.exit_code == 1

    def test_unknown_scenario(self):
        result = runner.invoke(app, ["simulate", "no-such-scenario"])

        assert result.exit_code == 1
        assert "not found" in result.output
        assert "multitask-4" in result.output


class TestSweep:
    def test_emit_and_csv(self, tmp_path):
        csv_path = tmp_path / "sweep.csv"
        result = runner.invoke(app, ["sweep", "--seed", "7", "--seeds", "1", "--emit", "--emit-dir", str(tmp_path),
                                     "--csv", str(csv_path)])

        assert result.exit_code == 0, result.output
        assert (tmp_path / "sweep-seed-7.json").exists()
        assert csv_path.read_text().splitlines()[0].startswith("seed,devices,modules,requests,greedy,brute")
        assert "Optimality rate" in result.output

    def test_csv_file_matches_csv_output(self, tmp_path):
        csv_path = tmp_path / "sweep.csv"
        result = runner.invoke(app, ["sweep", "--seed", "2", "--seeds", "2", "--csv", str(csv_path), "-f", "csv"])

        assert result.exit_code == 0, result.output
        written = csv_path.read_text()
        assert len(written.splitlines()) == 3
        assert result.output.startswith(written)

    def test_replayed_instance_validates(self, tmp_path):
        runner.invoke(app, ["sweep", "--seed", "3", "--seeds", "1", "--emit", "--emit-dir", str(tmp_path)])
        result = runner.invoke(app, ["validate", str(tmp_path / "sweep-seed-3.json")])

        assert result.exit_code == 0, result.output


class TestConfig:
    @pytest.fixture(autouse=True)
    def config_path(self, tmp_path, monkeypatch):
        path = tmp_path / "config.json"
        monkeypatch.setattr("modshare.config.settings.CONFIG_PATH", path)
        return path

    def test_set_and_show(self, config_path):
        result = runner.invoke(app, ["config", "set", "placement.replicate", "true"])

        assert result.exit_code == 0, result.output
        assert json.loads(config_path.read_text())["placement"]["replicate"] is True
        assert "placement.replicate: True" in runner.invoke(app, ["config", "show"]).output

    def test_unknown_key(self):
        result = runner.invoke(app, ["config", "set", "placement.colour", "red"])

        assert result.exit_code == 1
        assert "Unknown key" in result.output

    def test_invalid_value(self):
        result = runner.invoke(app, ["config", "set", "simulation.pipelining", "sideways"])

        assert result.exit_code == 1
