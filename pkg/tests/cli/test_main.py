"""Tests for the vsn-alloc command line."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from vsn_alloc.cli.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, app
from vsn_alloc.heuristic.trace import read_trace_jsonl
from vsn_alloc.model.solution import load_solution, save_solution
from vsn_alloc.scenario.loader import load_scenario
from tests.conftest import SINGLE_NODE

runner = CliRunner()


def _invoke(*args: str):
    return runner.invoke(app, [str(a) for a in args])


def _tiny_spec(path: Path) -> Path:
    spec = {
        "name": "cli",
        "base": {
            "n_scalar": 4,
            "n_multimedia": 2,
            "apps_per_kind": 1,
            "test_points_scalar": 2,
            "test_points_visual": 1,
            "area_width_m": 100.0,
            "area_height_m": 100.0,
        },
        "sweep": "routing_mode",
        "sweep_values": ["multipath", "static"],
        "method": "exact",
        "replications": 2,
        "base_seed": 5,
    }
    path.write_text(json.dumps(spec))
    return path


class TestGen:
    def test_writes_scenario(self, tmp_path: Path) -> None:
        out = tmp_path / "scenario.json"
        result = _invoke("gen", "--seed", 3, "--n-scalar", 4, "--n-multimedia", 2, "--out", out)
        assert result.exit_code == EXIT_OK
        scenario = load_scenario(out)
        assert len(scenario.nodes) == 6
        assert len(scenario.sink_ids) == 2

    def test_stdout_is_deterministic(self) -> None:
        first = _invoke("gen", "--seed", 9, "--n-scalar", 3, "--n-multimedia", 0)
        second = _invoke("gen", "--seed", 9, "--n-scalar", 3, "--n-multimedia", 0)
        assert first.exit_code == EXIT_OK
        assert first.stdout == second.stdout

    def test_too_many_sinks(self) -> None:
        result = _invoke("gen", "--n-scalar", 2, "--n-multimedia", 0, "--sinks", 3)
        assert result.exit_code == EXIT_USAGE


class TestSolve:
    def test_fixture_optimum(self, tmp_path: Path) -> None:
        out = tmp_path / "solution.json"
        stats = tmp_path / "stats.json"
        result = _invoke("solve", "--scenario", SINGLE_NODE, "--out", out, "--stats", stats)
        assert result.exit_code == EXIT_OK
        solution = load_solution(out)
        assert solution.objective == pytest.approx(0.99)
        assert solution.status.value == "optimal"
        assert "bnb_nodes" in json.loads(stats.read_text())

    def test_heuristic_with_trace(self, tmp_path: Path) -> None:
        out = tmp_path / "solution.json"
        trace = tmp_path / "trace.jsonl"
        result = _invoke(
            "solve", "--scenario", SINGLE_NODE, "--method", "heuristic",
            "--out", out, "--trace", trace,
        )
        assert result.exit_code == EXIT_OK
        assert load_solution(out).objective == pytest.approx(0.99)
        assert all(r.app_id == 0 for r in read_trace_jsonl(trace))

    def test_writes_lp(self, tmp_path: Path) -> None:
        lp = tmp_path / "model.lp"
        result = _invoke(
            "solve", "--scenario", SINGLE_NODE, "--out", tmp_path / "s.json", "--write-lp", lp,
        )
        assert result.exit_code == EXIT_OK
        assert lp.read_text().startswith("\\")

    def test_malformed_scenario(self, tmp_path: Path) -> None:
        bad = tmp_path / "bad.json"
        bad.write_text('{"nodes": [')
        result = _invoke("solve", "--scenario", bad)
        assert result.exit_code == EXIT_USAGE

    def test_missing_scenario(self, tmp_path: Path) -> None:
        result = _invoke("solve", "--scenario", tmp_path / "absent.json")
        assert result.exit_code == EXIT_USAGE

    def test_bad_routing_choice(self) -> None:
        result = _invoke("solve", "--scenario", SINGLE_NODE, "--routing", "flooding")
        assert result.exit_code == EXIT_USAGE


class TestValidate:
    def _solved(self, tmp_path: Path) -> Path:
        out = tmp_path / "solution.json"
        assert _invoke("solve", "--scenario", SINGLE_NODE, "--out", out).exit_code == EXIT_OK
        return out

    def test_valid(self, tmp_path: Path) -> None:
        path = self._solved(tmp_path)
        result = _invoke("validate", "--scenario", SINGLE_NODE, "--solution", path)
        assert result.exit_code == EXIT_OK
        assert "valid" in result.stdout

    def test_tampered(self, tmp_path: Path) -> None:
        path = self._solved(tmp_path)
        solution = load_solution(path)
        values = {**solution.values, "x[0]": 0.0}
        save_solution(solution.model_copy(update={"values": values}), path)
        result = _invoke("validate", "--scenario", SINGLE_NODE, "--solution", path)
        assert result.exit_code == EXIT_FAILED
        assert "Eq9[0]" in result.stdout

    def test_malformed_solution(self, tmp_path: Path) -> None:
        bad = tmp_path / "solution.json"
        bad.write_text('{"values": {"z[0]": "yes"}}')
        result = _invoke("validate", "--scenario", SINGLE_NODE, "--solution", bad)
        assert result.exit_code == EXIT_USAGE


class TestSweep:
    def test_reruns_write_identical_tables(self, tmp_path: Path) -> None:
        spec = _tiny_spec(tmp_path / "spec.json")
        for name in ("a", "b"):
            result = _invoke("sweep", "--spec", spec, "--out-dir", tmp_path / name)
            assert result.exit_code == EXIT_OK
        first = (tmp_path / "a" / "rows.csv").read_bytes()
        assert first == (tmp_path / "b" / "rows.csv").read_bytes()
        assert len(first.decode().splitlines()) == 1 + 4

    def test_report_flag(self, tmp_path: Path) -> None:
        spec = _tiny_spec(tmp_path / "spec.json")
        result = _invoke("sweep", "--spec", spec, "--out-dir", tmp_path / "out", "--report")
        assert result.exit_code == EXIT_OK
        assert "Sweep report: cli" in result.stdout

    def test_invalid_spec(self, tmp_path: Path) -> None:
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"name": "x", "sweep": "lifetime_days", "sweep_values": []}))
        result = _invoke("sweep", "--spec", spec, "--out-dir", tmp_path / "out")
        assert result.exit_code == EXIT_USAGE
