import json

import numpy as np
import pytest

from wavelab.cli.commands import CommandFactory
from wavelab.cli.config import SimulateParams, load_scenario, preset_names
from wavelab.cli.main import EXIT_DISCREPANCY, EXIT_ERROR, EXIT_OK, main, run
from wavelab.core.errors import ScenarioError


def _scenario(tmp_path, command, parameters, name="case", seed=4):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps({"name": name, "command": command, "seed": seed, "parameters": parameters}))
    return str(path)


def _report(out):
    return json.loads((out / "report.json").read_text())


def test_presets_all_load():
    assert set(preset_names()) == {
        "algebra-closure",
        "elastic-spsm",
        "nonelastic-spe",
        "phi-geometry",
        "reduced-kappa3",
    }
    for name in preset_names():
        scenario, _ = load_scenario(name)
        assert scenario.name == name


def test_unknown_key_is_a_schema_error(tmp_path):
    config = _scenario(tmp_path, "analyze", {"fields": ["gamma+", "gamma-"], "colour": "red"})
    out = tmp_path / "out"
    with pytest.raises(ScenarioError):
        load_scenario(config)
    assert run("analyze", config, out=str(out)) == EXIT_ERROR
    error = json.loads((out / "error.json").read_text())
    assert error["error"] == "schema_violation"


def test_unknown_preset_fails():
    assert run("analyze", "no-such-preset") == EXIT_ERROR


def test_command_must_match_scenario(tmp_path):
    config = _scenario(tmp_path, "analyze", {})
    assert run("geometry", config, out=str(tmp_path / "out")) == EXIT_ERROR


def test_analyze_acoustic_pair(tmp_path):
    config = _scenario(tmp_path, "analyze", {"fields": ["gamma+", "gamma-"], "samples": 20})
    out = tmp_path / "out"
    assert main(["analyze", "--config", config, "--out", str(out), "--format", "csv"]) == EXIT_OK
    report = _report(out)
    assert report["quasi_rectifiable"] is True
    assert report["discrepancy"] is False
    assert report["header"]["seed"] == 4
    assert (out / "pairs.csv").is_file()


def test_seed_flag_overrides_scenario(tmp_path):
    config = _scenario(tmp_path, "analyze", {"samples": 5})
    out = tmp_path / "out"
    assert run("analyze", config, out=str(out), seed=99) == EXIT_OK
    assert _report(out)["header"]["seed"] == 99


def test_constant_state_simulation(tmp_path):
    parameters = {"base": {"rho": 1.0, "p": 1.0, "u": 0.2}, "domain": {"nx": 32}, "T": 0.05}
    config = _scenario(tmp_path, "simulate", parameters)
    out = tmp_path / "out"
    assert run("simulate", config, out=str(out), fmt="csv") == EXIT_OK
    report = _report(out)
    assert report["system"] == "full"
    assert report["final_time"] == pytest.approx(0.05)
    assert report["nx"] == 32
    assert (out / "frames.csv").is_file()


def test_runs_are_byte_identical(tmp_path):
    parameters = {
        "waves": [{"kind": "S+", "profile": {"shape": "bump", "amplitude": 0.02, "center": 0.5, "width": 0.2}}],
        "domain": {"nx": 40},
        "T": 0.02,
    }
    config = _scenario(tmp_path, "simulate", parameters)
    first, second = tmp_path / "a", tmp_path / "b"
    assert run("simulate", config, out=str(first), fmt="csv") == EXIT_OK
    assert run("simulate", config, out=str(second), fmt="csv") == EXIT_OK
    for name in ("report.json", "frames.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_geometry_reports_printed_mismatch(tmp_path):
    parameters = {"t3_values": [0.0, 0.5], "points_per_side": 6, "foliation_samples": 50}
    config = _scenario(tmp_path, "geometry", parameters)
    out = tmp_path / "out"
    assert run("geometry", config, out=str(out)) == EXIT_DISCREPANCY
    report = _report(out)
    assert report["discrepancy"] is True
    assert report["geometry"]["second_form_ratio"] == pytest.approx(-0.5)


def test_compact_initial_block_becomes_waves(tmp_path):
    parameters = {
        "initial": {"type": "bump", "params": {"amplitude": 0.02, "center": 0.5, "width": 0.2}},
        "domain": {"nx": 40},
        "T": 0.02,
    }
    _, params = load_scenario(_scenario(tmp_path, "simulate", parameters))
    assert len(params.waves) == 1
    assert params.waves[0].kind.value == "S+"
    assert params.waves[0].profile.shape == "bump"
    assert params.waves[0].profile.center == pytest.approx(0.5)
    out = tmp_path / "out"
    assert run("simulate", _scenario(tmp_path, "simulate", parameters), out=str(out)) == EXIT_OK


def test_compact_initial_file_sets_csv(tmp_path):
    path = tmp_path / "initial.csv"
    rows = ["# x,rho,p,u"] + [f"{x},1.0,1.0,0.0" for x in np.linspace(0.0, 1.0, 11)]
    path.write_text("\n".join(rows) + "\n")
    params = SimulateParams.model_validate({"initial": {"type": "file", "params": {"path": str(path)}}})
    assert params.initial_csv == str(path)
    assert params.waves == []


def test_initial_and_waves_together_rejected(tmp_path):
    parameters = {
        "initial": {"type": "gauss", "params": {"amplitude": 0.02, "center": 0.5, "width": 0.1}},
        "waves": [{"kind": "S-", "profile": {"shape": "bump", "amplitude": 0.02, "center": 0.5, "width": 0.2}}],
    }
    out = tmp_path / "out"
    assert run("simulate", _scenario(tmp_path, "simulate", parameters), out=str(out)) == EXIT_ERROR
    assert json.loads((out / "error.json").read_text())["error"] == "schema_violation"


@pytest.mark.parametrize("expected, code", [(0, EXIT_OK), (1, EXIT_DISCREPANCY)])
def test_index_command_compares_expected_index(tmp_path, expected, code):
    parameters = {
        "waves": [{"kind": "S+", "profile": {"shape": "bump", "amplitude": 0.05, "center": 0.6, "width": 0.1}}],
        "domain": {"nx": 200},
        "T": 0.1,
        "expected_index": expected,
    }
    out = tmp_path / "out"
    assert run("index", _scenario(tmp_path, "index", parameters), out=str(out)) == code
    report = _report(out)
    assert report["interaction"]["index"] == 0
    assert report["discrepancy"] is (code == EXIT_DISCREPANCY)


def test_index_command_needs_a_wave(tmp_path):
    assert run("index", _scenario(tmp_path, "index", {"T": 0.1}), out=str(tmp_path / "out")) == EXIT_ERROR


def test_algebra_command_flags_kappa_dependence(tmp_path):
    parameters = {"variant": "K", "kappa": 2.0, "max_grade": 4, "witt_scan": False}
    out = tmp_path / "out"
    assert run("algebra", _scenario(tmp_path, "algebra", parameters), out=str(out)) == EXIT_DISCREPANCY
    report = _report(out)
    assert report["discrepancy"] is True
    assert "witt" not in report
    lines = (out / "brackets.md").read_text().splitlines()
    assert lines[0].startswith("<!-- ")
    assert "<!-- seed=4 -->" in lines
    assert '<!-- variant="K" -->' in lines


def test_unexpected_failure_writes_internal_error(tmp_path, monkeypatch):
    class Exploding:
        def run(self, params, ctx):
            raise RuntimeError("boom")

    monkeypatch.setattr(CommandFactory, "create_handler", staticmethod(lambda command: Exploding()))
    out = tmp_path / "out"
    assert run("analyze", _scenario(tmp_path, "analyze", {"samples": 5}), out=str(out)) == EXIT_ERROR
    error = json.loads((out / "error.json").read_text())
    assert error["error"] == "internal_error"
    assert error["details"]["type"] == "RuntimeError"
