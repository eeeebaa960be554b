"""Exhaustive oracle for tiny instances.

Applications are decided one at a time: either left out or placed with one
covering node per test point.  Placements that break the per-node cap, the
memory or the processing budget are never generated.  Each partial
placement is checked for flow feasibility with every node active and every
next-hop indicator relaxed to [0, 1], which is necessary for any completion,
and subtrees whose optimistic value cannot beat the best found are skipped.  At
a leaf the cheapest feasible set of active nodes is searched in order of
activation cost, and in singlepath mode every next-hop choice among active
nodes is tried.  The flow part of each check is the pure LP left once the
binary columns are pinned.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from vsn_alloc.errors import InstanceTooLargeError
from vsn_alloc.model.builder import build_model
from vsn_alloc.model.milp import MilpModel, RoutingKind, RoutingMode, VarKind
from vsn_alloc.model.solution import Solution, SolutionStatus
from vsn_alloc.scenario.models import ApplicationSpec, Scenario

from .simplex import solve_arrays

logger = logging.getLogger(__name__)

ENUMERATION_BUDGET = 2**24


@dataclass(frozen=True)
class _Placement:
    app: ApplicationSpec
    nodes: tuple[int, ...]
    """Sensing node per test point, in test-point order."""


def _placements(scenario: Scenario, app: ApplicationSpec) -> list[_Placement]:
    topo = scenario.topology
    covers = [topo.covering_nodes(app.id, tp.id) for tp in app.test_points]
    out: list[_Placement] = []
    for combo in itertools.product(*covers):
        counts = Counter(combo)
        if max(counts.values()) > app.per_node_cap:
            continue
        if any(
            n * app.memory_bits > scenario.profile_of(i).memory_bits
            or n * app.mips > scenario.profile_of(i).mips
            for i, n in counts.items()
        ):
            continue
        out.append(_Placement(app, combo))
    return out


def assignment_space(scenario: Scenario, mode: RoutingMode) -> int:
    """Upper bound on the binary assignments :func:`enumerate_exact` may visit."""
    topo = scenario.topology
    size = 1
    for app in scenario.applications:
        size *= 1 + math.prod(
            len(topo.covering_nodes(app.id, tp.id)) for tp in app.test_points
        )
    sinks = set(scenario.sink_ids)
    for nid in scenario.node_ids:
        # Inactive, or active with one of its next hops.
        hops = len(topo.out_links(nid)) if mode.kind is RoutingKind.SINGLEPATH else 1
        size *= 1 + (1 if nid in sinks else max(1, hops))
    return size


class _Enumerator:
    def __init__(self, scenario: Scenario, mode: RoutingMode, model: MilpModel) -> None:
        self.scenario = scenario
        self.mode = mode
        self.model = model
        self.arrays = model.to_arrays()
        self.apps = sorted(scenario.applications, key=lambda a: a.id)
        self.options = [_placements(scenario, app) for app in self.apps]
        self.cost = {n.id: n.activation_cost for n in scenario.nodes}
        self.sinks = set(scenario.sink_ids)
        self.singlepath = mode.kind is RoutingKind.SINGLEPATH
        # Sum of preferences of applications from position d onwards.
        self.rest = [sum(a.preference for a in self.apps[d:]) for d in range(len(self.apps) + 1)]
        self.best_obj = -math.inf
        self.best_x: np.ndarray | None = None
        self.lp_solves = 0

    # -- bound vectors --------------------------------------------------------

    def _pin(
        self,
        chosen: list[_Placement],
        active: set[int],
        next_hop: dict[int, tuple[int, int]] | None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Bounds with every binary column pinned.

        With ``next_hop=None`` the g columns keep their [0, 1] bounds, which
        relaxes the single next-hop choice.
        """
        lower = self.arrays.lower.copy()
        upper = self.arrays.upper.copy()
        for v in self.model.variables:
            if v.kind in (VarKind.Z, VarKind.H, VarKind.Y, VarKind.X):
                lower[v.index] = upper[v.index] = 0.0
            elif v.kind is VarKind.G and next_hop is not None:
                on = next_hop.get(v.key[0]) == v.key
                lower[v.index] = upper[v.index] = 1.0 if on else 0.0
        ones: list[int] = []
        for p in chosen:
            ones.append(self.model.index.position(VarKind.Z, p.app.id))
            for tp, nid in zip(p.app.test_points, p.nodes):
                ones.append(self.model.index.position(VarKind.H, p.app.id, tp.id))
                ones.append(self.model.index.position(VarKind.Y, nid, p.app.id, tp.id))
        ones.extend(self.model.index.position(VarKind.X, nid) for nid in active)
        lower[ones] = 1.0
        upper[ones] = 1.0
        return lower, upper

    def _feasible(
        self,
        chosen: list[_Placement],
        active: set[int],
        next_hop: dict[int, tuple[int, int]] | None = None,
    ) -> np.ndarray | None:
        lower, upper = self._pin(chosen, active, next_hop)
        self.lp_solves += 1
        result = solve_arrays(self.arrays, lower, upper)
        return result.x if result.is_optimal else None

    # -- leaf -----------------------------------------------------------------

    def _next_hop_choices(self, active: set[int]):
        topo = self.scenario.topology
        per_node: list[list[tuple[int, int]]] = []
        for nid in sorted(active - self.sinks):
            links = [lk for lk in topo.out_links(nid) if lk[1] in active]
            if links:
                per_node.append(links)
        for combo in itertools.product(*per_node):
            yield {lk[0]: lk for lk in combo}

    def _route(self, chosen: list[_Placement], active: set[int]) -> np.ndarray | None:
        x = self._feasible(chosen, active)
        if not self.singlepath or x is None:
            return x
        for next_hop in self._next_hop_choices(active):
            x = self._feasible(chosen, active, next_hop)
            if x is not None:
                return x
        return None

    def _leaf(self, chosen: list[_Placement], value: float) -> None:
        forced = {nid for p in chosen for nid in p.nodes}
        spare = sorted(set(self.scenario.node_ids) - forced)
        subsets = [
            extra
            for size in range(len(spare) + 1)
            for extra in itertools.combinations(spare, size)
        ]
        subsets.sort(key=lambda extra: (sum(self.cost[i] for i in extra), len(extra)))
        base_cost = sum(self.cost[i] for i in forced)
        for extra in subsets:
            obj = value - base_cost - sum(self.cost[i] for i in extra)
            if obj <= self.best_obj + 1e-12:
                return
            x = self._route(chosen, forced | set(extra))
            if x is not None:
                self.best_obj = obj
                self.best_x = x
                logger.debug("enumeration incumbent %.9g", obj)
                return

    # -- search ---------------------------------------------------------------

    def _search(self, depth: int, chosen: list[_Placement], value: float) -> None:
        forced_cost = sum(self.cost[nid] for nid in {n for p in chosen for n in p.nodes})
        if value + self.rest[depth] - forced_cost <= self.best_obj + 1e-12:
            return
        if depth == len(self.apps):
            self._leaf(chosen, value)
            return
        app = self.apps[depth]
        all_nodes = set(self.scenario.node_ids)
        for placement in self.options[depth]:
            trial = [*chosen, placement]
            if not self._fits(trial):
                continue
            if self._feasible(trial, all_nodes) is None:
                continue
            self._search(depth + 1, trial, value + app.preference)
        self._search(depth + 1, chosen, value)

    def _fits(self, chosen: list[_Placement]) -> bool:
        memory: Counter[int] = Counter()
        mips: Counter[int] = Counter()
        for p in chosen:
            for nid in p.nodes:
                memory[nid] += p.app.memory_bits
                mips[nid] += p.app.mips
        return all(
            memory[i] <= self.scenario.profile_of(i).memory_bits
            and mips[i] <= self.scenario.profile_of(i).mips
            for i in memory
        )

    def run(self) -> Solution:
        self._search(0, [], 0.0)
        logger.info(
            "enumeration finished: objective %.9g after %d LP checks",
            self.best_obj, self.lp_solves,
        )
        if self.best_x is None:
            return Solution.infeasible()
        return Solution.from_array(self.model, self.best_x, SolutionStatus.OPTIMAL)


def enumerate_exact(
    scenario: Scenario,
    mode: RoutingMode,
    *,
    budget: int = ENUMERATION_BUDGET,
) -> Solution:
    """Optimal solution of a tiny instance by exhaustive search.

    Raises
    ------
    InstanceTooLargeError
        If the assignment space exceeds *budget*.
    """
    space = assignment_space(scenario, mode)
    if space > budget:
        raise InstanceTooLargeError(
            f"{space} binary assignments exceed the enumeration budget of {budget}"
        )
    return _Enumerator(scenario, mode, build_model(scenario, mode)).run()
