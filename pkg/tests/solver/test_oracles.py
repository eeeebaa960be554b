"""Tests for the exact oracles and their agreement with branch and bound."""

from __future__ import annotations

import pytest

from vsn_alloc.errors import DomainError, InstanceTooLargeError
from vsn_alloc.model.builder import build_model
from vsn_alloc.model.milp import RoutingMode
from vsn_alloc.model.solution import SolutionStatus
from vsn_alloc.model.validate import validate_solution
from vsn_alloc.scenario.generator import knapsack_scenario, random_scenario
from vsn_alloc.scenario.models import ApplicationKind, Scenario
from vsn_alloc.scenario.routing import build_dodag
from vsn_alloc.solver.bnb import solve_milp
from vsn_alloc.solver.enumerate import assignment_space, enumerate_exact
from vsn_alloc.solver.knapsack import multi_knapsack_dp
from tests.conftest import make_node, make_scenario


def _modes(scenario: Scenario) -> dict[str, RoutingMode]:
    return {
        "multipath": RoutingMode.multipath(),
        "singlepath": RoutingMode.singlepath(),
        "static": RoutingMode.static(build_dodag(scenario)),
    }


def _tiny_random(seed: int) -> Scenario:
    return random_scenario(
        seed,
        n_scalar=4,
        n_multimedia=2,
        area_width_m=100.0,
        area_height_m=100.0,
        kinds=[ApplicationKind.TEMPERATURE, ApplicationKind.CTA],
        test_points_scalar=1,
        test_points_visual=1,
    )


def _knapsack_inputs(scenario: Scenario) -> tuple[list[float], list[float], list[float]]:
    values = [a.preference for a in scenario.applications]
    weights = [a.memory_bits for a in scenario.applications]
    capacities = [scenario.profile_of(n.id).memory_bits for n in scenario.nodes]
    return values, weights, capacities


class TestKnapsackDp:
    def test_single_bin(self) -> None:
        assert multi_knapsack_dp([6, 10, 12], [1, 2, 3], [5]) == 22

    def test_two_bins(self) -> None:
        assert multi_knapsack_dp([5, 5, 5], [3, 3, 3], [3, 4]) == 10

    def test_item_too_heavy(self) -> None:
        assert multi_knapsack_dp([9], [10], [3, 4]) == 0

    def test_no_bins(self) -> None:
        assert multi_knapsack_dp([1, 2], [1, 1], []) == 0

    def test_mismatched_lengths(self) -> None:
        with pytest.raises(DomainError):
            multi_knapsack_dp([1, 2], [1], [5])

    def test_negative_weight(self) -> None:
        with pytest.raises(DomainError):
            multi_knapsack_dp([1], [-1], [5])

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_branch_and_bound(self, seed: int) -> None:
        scenario = knapsack_scenario(seed, n_nodes=3, n_apps=5)
        expected = multi_knapsack_dp(*_knapsack_inputs(scenario))
        result = solve_milp(build_model(scenario, RoutingMode.multipath()))
        assert result.solution.objective == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_enumeration(self, seed: int) -> None:
        scenario = knapsack_scenario(seed, n_nodes=2, n_apps=4)
        expected = multi_knapsack_dp(*_knapsack_inputs(scenario))
        solution = enumerate_exact(scenario, RoutingMode.multipath())
        assert solution.objective == pytest.approx(expected, abs=1e-6)


class TestEnumeration:
    def test_assignment_space(self, chain3: Scenario) -> None:
        assert assignment_space(chain3, RoutingMode.multipath()) == 16
        assert assignment_space(chain3, RoutingMode.singlepath()) == 24

    def test_budget_enforced(self, chain3: Scenario) -> None:
        with pytest.raises(InstanceTooLargeError):
            enumerate_exact(chain3, RoutingMode.multipath(), budget=15)

    @pytest.mark.parametrize("mode_name", ["multipath", "singlepath", "static"])
    def test_chain(self, chain3: Scenario, mode_name: str) -> None:
        mode = _modes(chain3)[mode_name]
        solution = enumerate_exact(chain3, mode)
        assert solution.status is SolutionStatus.OPTIMAL
        assert solution.objective == pytest.approx(0.97)
        assert validate_solution(chain3, mode, solution) == []

    def test_single_node(self, single_node: Scenario) -> None:
        assert enumerate_exact(single_node, RoutingMode.multipath()).objective == pytest.approx(0.99)

    def test_no_applications(self) -> None:
        scenario = make_scenario([make_node(0, 10.0, 10.0, is_sink=True), make_node(1, 40.0, 10.0)])
        solution = enumerate_exact(scenario, RoutingMode.multipath())
        assert solution.objective == 0.0
        assert solution.value("x[0]") == 0.0 and solution.value("x[1]") == 0.0

    @pytest.mark.statistical
    @pytest.mark.parametrize("mode_name", ["multipath", "singlepath", "static"])
    def test_agrees_with_branch_and_bound(self, mode_name: str) -> None:
        accepted = 0
        for seed in range(400):
            scenario = _tiny_random(seed)
            mode = _modes(scenario)[mode_name]
            try:
                exact = enumerate_exact(scenario, mode)
            except InstanceTooLargeError:
                continue
            result = solve_milp(build_model(scenario, mode))
            assert result.solution.objective == pytest.approx(exact.objective, abs=1e-6), seed
            assert validate_solution(scenario, mode, exact) == []
            accepted += 1
            if accepted == 50:
                break
        assert accepted == 50
