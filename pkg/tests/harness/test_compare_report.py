"""Tests for gap pairing, the text report and sweep table output."""

from __future__ import annotations

import csv
from pathlib import Path

import pytest

from vsn_alloc.harness.compare import compare_methods, relative_objective_gap
from vsn_alloc.harness.io import (
    load_spec,
    read_rows_json,
    write_rows_csv,
    write_sweep_outputs,
)
from vsn_alloc.harness.models import ROW_COLUMNS, Method, MetricsRow, SweepAxis
from vsn_alloc.harness.report import generate_text_report
from vsn_alloc.model.milp import RoutingKind
from tests.conftest import EXPERIMENTS


def _make_row(
    method: Method,
    objective: float,
    *,
    seed: int = 0,
    value: float | str = 1.0,
    status: str = "optimal",
    wall: float = 1.0,
) -> MetricsRow:
    return MetricsRow(
        sweep_value=value,
        seed=seed,
        method=method,
        routing=RoutingKind.STATIC,
        status=status,
        objective=objective,
        active_temperature=1,
        wall_time_s=wall,
    )


def _pair(exact: float, heuristic: float, seed: int = 0, **kw) -> list[MetricsRow]:
    return [
        _make_row(Method.EXACT, exact, seed=seed, wall=2.0, **kw),
        _make_row(Method.HEURISTIC, heuristic, seed=seed, status="feasible", wall=0.5, **kw),
    ]


class TestRelativeGap:
    def test_plain(self) -> None:
        assert relative_objective_gap(10.0, 9.0) == pytest.approx(0.1)

    def test_zero_optimum(self) -> None:
        assert relative_objective_gap(0.0, 0.0) == 0.0


class TestCompareMethods:
    def test_equal_objectives(self) -> None:
        summary = compare_methods(_pair(3.5, 3.5))
        assert summary.mean_gap == 0.0
        assert summary.missing == []

    def test_aggregates(self) -> None:
        rows = _pair(10.0, 9.0, seed=0) + _pair(10.0, 10.0, seed=1)
        summary = compare_methods(rows)
        assert summary.mean_gap == pytest.approx(0.05)
        assert (summary.min_gap, summary.max_gap) == (pytest.approx(0.0), pytest.approx(0.1))
        assert summary.mean_time_ratio == pytest.approx(0.25)
        assert summary.heuristic_faster_fraction == 1.0

    def test_unpaired_and_failed_points(self) -> None:
        rows = (
            _pair(10.0, 9.0, seed=0)
            + [_make_row(Method.EXACT, 4.0, seed=1)]
            + [
                _make_row(Method.EXACT, 0.0, seed=2, status="error"),
                _make_row(Method.HEURISTIC, 1.0, seed=2, status="feasible"),
            ]
        )
        summary = compare_methods(rows)
        assert summary.missing == [("1.0", 1), ("1.0", 2)]
        assert len(summary.points) == 1

    def test_no_pairs(self) -> None:
        summary = compare_methods([_make_row(Method.EXACT, 1.0)])
        assert summary.mean_gap is None
        assert summary.heuristic_faster_fraction is None


class TestReport:
    def test_sections(self) -> None:
        rows = _pair(10.0, 9.0, seed=0) + _pair(10.0, 10.0, seed=1)
        text = generate_text_report(rows, "gap")
        assert "Sweep report: gap" in text
        assert "## Objective and deployment" in text
        assert "## Heuristic vs exact" in text
        assert "Mean gap:  5.00%" in text
        assert "stopped by a limit" not in text

    def test_lists_limited_rows(self) -> None:
        rows = [
            _make_row(Method.EXACT, 2.0, status="feasible"),
            _make_row(Method.EXACT, 0.0, seed=1, status="error"),
        ]
        text = generate_text_report(rows)
        assert "## Rows stopped by a limit or error: 2" in text
        assert "Heuristic vs exact" not in text

    def test_all_errors_group(self) -> None:
        text = generate_text_report([_make_row(Method.EXACT, 0.0, status="error")])
        assert "(all errors)" in text


class TestSweepTables:
    def test_csv_header_and_cells(self, tmp_path: Path) -> None:
        rows = _pair(10.0, 9.0)
        path = write_rows_csv(rows, tmp_path / "rows.csv")
        with path.open() as fh:
            records = list(csv.reader(fh))
        assert records[0] == ROW_COLUMNS
        assert records[1][ROW_COLUMNS.index("method")] == "exact"
        assert records[2][ROW_COLUMNS.index("bound")] == ""
        assert "wall_time_s" not in records[0]

    def test_wall_time_stays_in_timings(self, tmp_path: Path) -> None:
        fast = _pair(10.0, 9.0)
        slow = [r.model_copy(update={"wall_time_s": 99.0}) for r in fast]
        a = write_sweep_outputs(fast, tmp_path / "a")
        b = write_sweep_outputs(slow, tmp_path / "b")
        assert a["rows_csv"].read_bytes() == b["rows_csv"].read_bytes()
        assert a["rows_json"].read_bytes() == b["rows_json"].read_bytes()
        assert a["timings_csv"].read_bytes() != b["timings_csv"].read_bytes()

    def test_json_round_trip(self, tmp_path: Path) -> None:
        rows = _pair(10.0, 9.0) + _pair(5.0, 5.0, seed=3, value="static")
        written = write_sweep_outputs(rows, tmp_path)
        restored = read_rows_json(written["rows_json"])
        assert restored == [r.model_copy(update={"wall_time_s": 0.0}) for r in rows]


class TestBundledSpecs:
    @pytest.mark.parametrize("path", sorted(EXPERIMENTS.glob("*.json")), ids=lambda p: p.stem)
    def test_loads(self, path: Path) -> None:
        spec = load_spec(path)
        assert spec.sweep_values
        assert spec.name

    def test_full_scale_layout(self) -> None:
        base = load_spec(EXPERIMENTS / "full_scale.json").base
        assert (base.n_scalar, base.n_multimedia) == (36, 36)
        assert (base.area_width_m, base.area_height_m) == (200.0, 200.0)

    def test_lifetime_hits_battery_thresholds(self) -> None:
        spec = load_spec(EXPERIMENTS / "lifetime.json")
        assert 1.875 in spec.sweep_values
        assert 7.5 in spec.sweep_values

    def test_routing_suite(self) -> None:
        spec = load_spec(EXPERIMENTS / "routing.json")
        assert spec.sweep is SweepAxis.ROUTING_MODE
        assert spec.base.p_max_dbm == -10.0
