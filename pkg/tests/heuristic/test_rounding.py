"""Tests for the LP-rounding heuristic."""

from __future__ import annotations

from pathlib import Path

import pytest

from vsn_alloc.harness.compare import relative_objective_gap
from vsn_alloc.heuristic.rounding import RoundingHeuristic, finalize, heuristic_trace, replay_trace, run_heuristic
from vsn_alloc.heuristic.trace import TraceAction, TraceRecord, read_trace_jsonl, write_trace_jsonl
from vsn_alloc.model.builder import build_model
from vsn_alloc.model.milp import RoutingMode, relax
from vsn_alloc.model.solution import SolutionStatus
from vsn_alloc.model.validate import validate_solution
from vsn_alloc.scenario.generator import random_scenario
from vsn_alloc.scenario.models import Scenario, rebuild
from vsn_alloc.scenario.routing import build_dodag
from vsn_alloc.solver.bnb import solve_milp
from vsn_alloc.solver.simplex import solve_lp
from tests.conftest import make_app


def _static(scenario: Scenario) -> RoutingMode:
    return RoutingMode.static(build_dodag(scenario))


def _make_contested(seed: int) -> Scenario:
    """Small two-technology scenario where apps compete for the same nodes."""
    return random_scenario(
        seed,
        n_scalar=6,
        n_multimedia=4,
        apps_per_kind=2,
        area_width_m=140.0,
        area_height_m=140.0,
        test_points_scalar=3,
        test_points_visual=2,
    )


def _run(scenario: Scenario, seed: int = 0) -> RoundingHeuristic:
    heuristic = RoundingHeuristic(scenario, seed)
    heuristic.run()
    return heuristic


class TestTrivialInstances:
    def test_single_node(self, single_node: Scenario) -> None:
        heuristic = RoundingHeuristic(single_node, 0)
        solution = heuristic.run()
        assert solution.objective == pytest.approx(0.99)
        assert solution.status is SolutionStatus.FEASIBLE
        assert heuristic.state.lp_solves == 1
        assert heuristic_trace(heuristic.state) == []

    def test_integral_relaxation_is_returned_directly(self, chain3: Scenario) -> None:
        heuristic = RoundingHeuristic(chain3, 0)
        solution = heuristic.run()
        assert solution.objective == pytest.approx(0.97)
        assert heuristic.state.lp_solves == 1
        assert solution.value("x[1]") == 1.0

    def test_uncoverable_application_stays_off(self, chain3: Scenario) -> None:
        apps = [*chain3.applications, make_app(1, [(190.0, 10.0)], preference=5.0)]
        scenario = rebuild(chain3, applications=apps)
        solution = run_heuristic(scenario, 0)
        assert solution.value("z[1]") == 0.0
        assert solution.objective == pytest.approx(0.97)

    def test_camera_pair(self, camera_pair: Scenario) -> None:
        assert run_heuristic(camera_pair, 3).objective == pytest.approx(11.98)


class TestDecisionLog:
    def test_same_seed_same_run(self) -> None:
        scenario = _make_contested(1)
        a, b = _run(scenario, 7), _run(scenario, 7)
        assert heuristic_trace(a.state) == heuristic_trace(b.state)
        assert run_heuristic(scenario, 7) == run_heuristic(scenario, 7)

    def test_decisions_are_disjoint(self) -> None:
        for seed in range(5):
            state = _run(_make_contested(seed)).state
            assert not state.committed & state.dismissed
            decided = [r.app_id for r in state.trace]
            assert len(decided) == len(set(decided))
            assert set(decided) == state.committed | state.dismissed

    def test_record_fixes_match_actions(self) -> None:
        for seed in range(5):
            for record in _run(_make_contested(seed)).state.trace:
                z = record.fixes[f"z[{record.app_id}]"]
                if record.action is TraceAction.COMMITTED:
                    assert z == 1.0
                    assert any(name.startswith("y[") for name in record.fixes)
                else:
                    assert z == 0.0
                    assert len(record.fixes) == 1

    def test_committed_apps_stay_deployed(self) -> None:
        for seed in range(5):
            scenario = _make_contested(seed)
            heuristic = RoundingHeuristic(scenario, seed)
            solution = heuristic.run()
            for app_id in heuristic.state.committed:
                assert solution.value(f"z[{app_id}]") == 1.0
            for app_id in heuristic.state.dismissed:
                assert solution.value(f"z[{app_id}]") == 0.0

    def test_lp_solves_are_bounded(self) -> None:
        for seed in range(8):
            scenario = _make_contested(seed)
            state = _run(scenario, seed).state
            n_apps = len(scenario.applications)
            assert state.lp_solves <= 3 * n_apps + 1
            assert len(state.trace) <= n_apps

    def test_replay_reproduces_solution(self) -> None:
        for seed in range(5):
            scenario = _make_contested(seed)
            heuristic = RoundingHeuristic(scenario, seed)
            solution = heuristic.run()
            replayed = replay_trace(scenario, heuristic_trace(heuristic.state))
            assert replayed.objective == pytest.approx(solution.objective, abs=1e-9)
            for name, value in solution.values.items():
                assert replayed.value(name) == pytest.approx(value, abs=1e-6)

    def test_jsonl_round_trip(self, tmp_path: Path) -> None:
        trace = _run(_make_contested(2)).state.trace
        path = write_trace_jsonl(trace, tmp_path / "trace" / "run.jsonl")
        assert read_trace_jsonl(path) == trace
        assert len(path.read_text().splitlines()) == len(trace)

    def test_record_rejects_unknown_fields(self) -> None:
        with pytest.raises(ValueError):
            TraceRecord.model_validate(
                {"iteration": 0, "lp_objective": None, "action": "committed", "app_id": 0, "fixes": {}, "x": 1}
            )


class TestQuality:
    def test_solutions_validate(self) -> None:
        for seed in range(10):
            scenario = _make_contested(seed)
            solution = run_heuristic(scenario, seed)
            assert validate_solution(scenario, _static(scenario), solution) == []

    def test_bound_sandwich(self) -> None:
        for seed in range(4):
            scenario = _make_contested(seed)
            mode = _static(scenario)
            model = build_model(scenario, mode)
            heuristic = run_heuristic(scenario, seed).objective
            exact = solve_milp(model).solution.objective
            relaxed = solve_lp(relax(model)).objective
            assert heuristic <= exact + 1e-6
            assert exact <= relaxed + 1e-6

    def test_finalize_rounds_activation_up(self, chain3: Scenario) -> None:
        mode = _static(chain3)
        model = relax(build_model(chain3, mode))
        lp = solve_lp(model)
        assert 0.0 < lp.values(model)["x[1]"] < 1.0
        solution = finalize(chain3, mode, model, lp.x)
        assert [solution.value(f"x[{n}]") for n in range(3)] == [1.0, 1.0, 1.0]

    @pytest.mark.statistical
    def test_close_to_exact_on_desk_suite(self) -> None:
        heuristic_total = exact_total = gap_total = 0.0
        n = 30
        for seed in range(n):
            scenario = random_scenario(seed, n_scalar=6, n_multimedia=6, apps_per_kind=2)
            mode = _static(scenario)
            heuristic = run_heuristic(scenario, seed)
            assert validate_solution(scenario, mode, heuristic) == []
            exact = solve_milp(build_model(scenario, mode)).solution.objective
            heuristic_total += heuristic.objective
            exact_total += exact
            gap_total += relative_objective_gap(exact, heuristic.objective)
        assert heuristic_total >= 0.85 * exact_total
        assert 0.0 <= gap_total / n <= 0.15
