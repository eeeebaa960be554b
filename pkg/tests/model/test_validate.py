"""Tests for the independent solution validator."""

from __future__ import annotations

from vsn_alloc.model.milp import RoutingMode
from vsn_alloc.model.solution import Solution, SolutionStatus
from vsn_alloc.model.validate import validate_solution
from vsn_alloc.scenario.models import Scenario, rebuild
from vsn_alloc.scenario.routing import build_dodag
from tests.conftest import make_app, make_chain3_solution


def _tamper(solution: Solution, **changes: float) -> Solution:
    """Copy of *solution* with some values replaced."""
    values = dict(solution.values)
    values.update(changes)
    return solution.model_copy(update={"values": values})


def _tags(scenario: Scenario, solution: Solution, mode: RoutingMode | None = None) -> set[str]:
    mode = mode or RoutingMode.multipath()
    return {v.tag for v in validate_solution(scenario, mode, solution)}


class TestValidSolutions:
    def test_hand_built_optimum(self, chain3: Scenario) -> None:
        assert validate_solution(chain3, RoutingMode.multipath(), make_chain3_solution()) == []

    def test_valid_under_static_routing(self, chain3: Scenario) -> None:
        mode = RoutingMode.static(build_dodag(chain3))
        assert validate_solution(chain3, mode, make_chain3_solution()) == []

    def test_empty_deployment(self, chain3: Scenario) -> None:
        solution = Solution(values={}, objective=0.0, status=SolutionStatus.FEASIBLE)
        assert validate_solution(chain3, RoutingMode.multipath(), solution) == []

    def test_nothing_to_check_without_values(self, chain3: Scenario) -> None:
        assert validate_solution(chain3, RoutingMode.multipath(), Solution.infeasible()) == []


class TestViolations:
    def test_uncovered_test_point(self, chain3: Scenario) -> None:
        bad = _tamper(make_chain3_solution(), **{"y[2,0,0]": 0.0})
        tags = _tags(chain3, bad)
        assert {"Eq2[0,0]", "Eq4[0]", "Eq7[2]"} <= tags

    def test_fractional_binary(self, chain3: Scenario) -> None:
        bad = _tamper(make_chain3_solution(), **{"x[1]": 0.5})
        assert "Bin[x[1]]" in _tags(chain3, bad)

    def test_binary_out_of_range(self, chain3: Scenario) -> None:
        bad = _tamper(make_chain3_solution(), **{"z[0]": 2.0})
        assert "Bound[z[0]]" in _tags(chain3, bad)

    def test_inactive_relay(self, chain3: Scenario) -> None:
        bad = _tamper(make_chain3_solution(), **{"x[1]": 0.0})
        bad = bad.model_copy(update={"objective": 0.98})
        assert _tags(chain3, bad) == {"Eq9[1]"}

    def test_flow_on_non_viable_link(self, chain3: Scenario) -> None:
        bad = _tamper(make_chain3_solution(), **{"f[2,0]": 1.0})
        assert "Eq10[2,0]" in _tags(chain3, bad)

    def test_sensing_outside_coverage(self, chain3: Scenario) -> None:
        bad = _tamper(make_chain3_solution(), **{"y[0,0,0]": 1.0})
        assert "Eq2b[0,0,0]" in _tags(chain3, bad)

    def test_unparseable_name(self, chain3: Scenario) -> None:
        bad = _tamper(make_chain3_solution(), **{"w[1]": 0.0})
        assert "Name[w[1]]" in _tags(chain3, bad)

    def test_memory_budget(self, chain3: Scenario) -> None:
        heavy = rebuild(chain3, applications=[make_app(0, [(100.0, 100.0)], memory_bits=60_000.0)])
        assert "Eq5[2]" in _tags(heavy, make_chain3_solution())

    def test_lifetime_budget(self, chain3: Scenario) -> None:
        hungry = rebuild(chain3, applications=[make_app(0, [(100.0, 100.0)], cpu_watts=0.5)])
        assert "Eq18[2]" in _tags(hungry, make_chain3_solution())

    def test_off_tree_flow_under_static_routing(self, chain3: Scenario) -> None:
        looped = _tamper(make_chain3_solution(), **{"f[1,2]": 100.0, "f[2,1]": 600.0})
        assert _tags(chain3, looped) == set()
        static = RoutingMode.static(build_dodag(chain3))
        assert _tags(chain3, looped, static) == {"Static[1,2]"}

    def test_two_next_hops_under_singlepath(self, chain3: Scenario) -> None:
        split = _tamper(make_chain3_solution(), **{"g[1,0]": 1.0, "g[1,2]": 1.0, "g[2,1]": 1.0})
        assert "Eq12[1]" in _tags(chain3, split, RoutingMode.singlepath())

    def test_flow_over_unselected_link(self, chain3: Scenario) -> None:
        unselected = _tamper(make_chain3_solution(), **{"g[2,1]": 1.0})
        assert _tags(chain3, unselected, RoutingMode.singlepath()) == {"Eq13[1,0]"}

    def test_wrong_objective(self, chain3: Scenario) -> None:
        bad = make_chain3_solution().model_copy(update={"objective": 1.0})
        assert _tags(chain3, bad) == {"Objective"}
