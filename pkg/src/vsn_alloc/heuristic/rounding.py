"""Iterative LP-rounding heuristic over the static-routing model.

The running relaxation (``problem1``) accumulates permanent bound fixes.
Each round either drops an application the relaxation leaves inactive,
or tries the most valuable undecided application: pin it on, pin each of
its test points to the node sensing it most, and keep the fixes if the
relaxation stays feasible.  Once the relaxation is integral on the
deployment columns, active nodes are rounded up and flows are read off the
last LP.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from vsn_alloc.errors import HeuristicAbortedError, SolutionValidationError
from vsn_alloc.model.builder import build_model
from vsn_alloc.model.milp import MilpModel, RoutingMode, VarKind, fix_variable, relax
from vsn_alloc.model.solution import Solution, SolutionStatus
from vsn_alloc.model.validate import validate_solution
from vsn_alloc.rng import SeededRNG
from vsn_alloc.scenario.models import Scenario
from vsn_alloc.scenario.routing import build_dodag
from vsn_alloc.solver.simplex import LpResult, solve_lp

from .trace import TraceAction, TraceRecord

logger = logging.getLogger(__name__)

INTEGRALITY_TOL = 1e-6
INACTIVE_TOL = 1e-6
"""z_j at or below this counts as not active at all."""

_DEPLOYMENT_KINDS = (VarKind.Z, VarKind.H, VarKind.Y)


@dataclass
class HeuristicState:
    problem1: MilpModel
    rng: SeededRNG
    committed: set[int] = field(default_factory=set)
    dismissed: set[int] = field(default_factory=set)
    trace: list[TraceRecord] = field(default_factory=list)
    lp_solves: int = 0
    lp_iterations: int = 0
    wall_time_s: float = 0.0

    def undecided(self, app_ids: list[int]) -> list[int]:
        return [j for j in app_ids if j not in self.committed and j not in self.dismissed]


def heuristic_trace(state: HeuristicState) -> list[TraceRecord]:
    """The ordered decision log of a finished run."""
    return list(state.trace)


def _apply_fixes(model: MilpModel, fixes: dict[str, float]) -> MilpModel:
    for name, value in fixes.items():
        model = fix_variable(model, model.by_name(name), value)
    return model


def _deployment_integral(model: MilpModel, x: np.ndarray) -> bool:
    cols = [v.index for v in model.variables if v.kind in _DEPLOYMENT_KINDS]
    vals = x[cols]
    return bool(np.all(np.abs(vals - np.round(vals)) <= INTEGRALITY_TOL))


class RoundingHeuristic:
    """One run of the heuristic on one scenario.

    Parameters
    ----------
    scenario:
        Instance to solve; its DODAG is built here.
    seed:
        Seeds the choice among inactive applications, the only random step.
    deadline:
        Optional ``time.monotonic()`` instant passed to every LP solve.
    """

    def __init__(self, scenario: Scenario, seed: int, *, deadline: float | None = None) -> None:
        self.scenario = scenario
        self.mode = RoutingMode.static(build_dodag(scenario))
        self.deadline = deadline
        self.app_ids = sorted(app.id for app in scenario.applications)
        self.state = HeuristicState(
            problem1=relax(build_model(scenario, self.mode)),
            rng=SeededRNG(seed).fork("dismiss"),
        )

    # -- LP plumbing ---------------------------------------------------------

    def _solve(self, model: MilpModel) -> LpResult:
        result = solve_lp(model, deadline=self.deadline)
        self.state.lp_solves += 1
        self.state.lp_iterations += result.iterations
        logger.debug(
            "LP %d: %s objective=%.9g", self.state.lp_solves, result.status.value, result.objective
        )
        return result

    def _z(self, model: MilpModel, x: np.ndarray, app_id: int) -> float:
        return float(x[model.index.position(VarKind.Z, app_id)])

    def _record(self, action: TraceAction, app_id: int, lp: LpResult | None, fixes: dict[str, float]) -> None:
        self.state.trace.append(
            TraceRecord(
                iteration=len(self.state.trace),
                lp_objective=lp.objective if lp is not None and lp.is_optimal else None,
                action=action,
                app_id=app_id,
                fixes=fixes,
            )
        )
        logger.info("heuristic: %s application %d", action.value, app_id)

    def _dismiss(self, action: TraceAction, app_id: int, lp: LpResult | None) -> None:
        fixes = {f"z[{app_id}]": 0.0}
        self.state.problem1 = _apply_fixes(self.state.problem1, fixes)
        self.state.dismissed.add(app_id)
        self._record(action, app_id, lp, fixes)

    def _abort(self, message: str) -> HeuristicAbortedError:
        return HeuristicAbortedError(message, list(self.state.trace))

    # -- main loop -----------------------------------------------------------

    def run(self) -> Solution:
        started = time.monotonic()
        try:
            return self._run()
        finally:
            self.state.wall_time_s = time.monotonic() - started

    def _run(self) -> Solution:
        state = self.state
        current: LpResult | None = None
        first = True
        while True:
            if current is None:
                current = self._solve(state.problem1)
            if not current.is_optimal:
                if first:
                    logger.warning("relaxation infeasible; returning the empty deployment")
                    zeros = np.zeros(state.problem1.n_vars)
                    return Solution.from_array(state.problem1, zeros, SolutionStatus.FEASIBLE)
                raise self._abort(f"running relaxation became {current.status.value}")
            first = False
            model = state.problem1
            if _deployment_integral(model, current.x):
                return self._finalize(current)

            # Drop applications the relaxation does not use at all.
            while True:
                idle = [
                    j for j in state.undecided(self.app_ids)
                    if self._z(model, current.x, j) <= INACTIVE_TOL
                ]
                if not idle:
                    break
                j = state.rng.random_choice(idle)
                self._dismiss(TraceAction.FORCED_ZERO, j, current)
                model = state.problem1
                current = self._solve(model)
                if not current.is_optimal:
                    raise self._abort(f"relaxation infeasible after dropping application {j}")

            undecided = state.undecided(self.app_ids)
            if not undecided:
                return self._finalize(current)

            apps = {a.id: a for a in self.scenario.applications}
            chosen = undecided[0]
            best = apps[chosen].preference * self._z(model, current.x, chosen)
            for j in undecided[1:]:
                score = apps[j].preference * self._z(model, current.x, j)
                if score > best:
                    chosen, best = j, score
            current = self._try_commit(chosen, current)

    def _try_commit(self, app_id: int, lp1: LpResult) -> LpResult | None:
        """Pin *app_id* on; return the new running LP, or None to re-solve."""
        state = self.state
        z_fix = {f"z[{app_id}]": 1.0}
        problem2 = _apply_fixes(state.problem1, z_fix)
        lp2 = self._solve(problem2)
        if not lp2.is_optimal:
            self._dismiss(TraceAction.DISMISSED, app_id, lp1)
            return None

        app = self.scenario.application(app_id)
        topo = self.scenario.topology
        fixes = dict(z_fix)
        for tp in app.test_points:
            best_node, best_val = None, -np.inf
            for i in topo.covering_nodes(app_id, tp.id):
                val = float(lp2.x[problem2.index.position(VarKind.Y, i, app_id, tp.id)])
                if val > best_val:
                    best_node, best_val = i, val
            if best_node is None:
                raise self._abort(f"test point {tp.id} of application {app_id} has no covering node")
            fixes[f"y[{best_node},{app_id},{tp.id}]"] = 1.0

        rounded = _apply_fixes(state.problem1, fixes)
        lp3 = self._solve(rounded)
        if not lp3.is_optimal:
            self._dismiss(TraceAction.DISMISSED, app_id, lp2)
            return None
        state.problem1 = rounded
        state.committed.add(app_id)
        self._record(TraceAction.COMMITTED, app_id, lp2, fixes)
        return lp3

    # -- finalisation --------------------------------------------------------

    def _finalize(self, lp: LpResult) -> Solution:
        solution = finalize(self.scenario, self.mode, self.state.problem1, lp.x)
        violations = validate_solution(self.scenario, self.mode, solution)
        if violations:
            raise SolutionValidationError("heuristic produced an invalid deployment", violations)
        logger.info(
            "heuristic finished: objective %.9g, %d committed, %d dismissed, %d LP solves",
            solution.objective, len(self.state.committed), len(self.state.dismissed),
            self.state.lp_solves,
        )
        return solution


def finalize(scenario: Scenario, mode: RoutingMode, model: MilpModel, lp_x: np.ndarray) -> Solution:
    """Round an LP point that is integral on z, h, y into a deployment.

    Deployment columns are snapped to the nearest integer, a node is active
    when its relaxed activation exceeds the tolerance or it still carries
    traffic, and flows are kept as solved.
    """
    x = lp_x.copy()
    for v in model.variables:
        if v.kind in _DEPLOYMENT_KINDS:
            x[v.index] = round(x[v.index])
    load: dict[int, float] = {nid: 0.0 for nid in scenario.node_ids}
    for v in model.variables:
        if v.kind is VarKind.F:
            load[v.key[1]] += x[v.index]
        elif v.kind is VarKind.Y and x[v.index] > 0.5:
            load[v.key[0]] += scenario.application(v.key[1]).rate_bps
    for v in model.variables:
        if v.kind is VarKind.X:
            x[v.index] = 1.0 if x[v.index] > INACTIVE_TOL or load[v.key[0]] > 0 else 0.0
    return Solution.from_array(model, x, SolutionStatus.FEASIBLE)


def run_heuristic(scenario: Scenario, seed: int, *, deadline: float | None = None) -> Solution:
    """Solve *scenario* with the LP-rounding heuristic under static routing."""
    return RoundingHeuristic(scenario, seed, deadline=deadline).run()


def replay_trace(scenario: Scenario, trace: list[TraceRecord]) -> Solution:
    """Apply every recorded fix to a fresh relaxation and finalize its LP.

    Reproduces the solution of the run that produced *trace*.
    """
    mode = RoutingMode.static(build_dodag(scenario))
    model = relax(build_model(scenario, mode))
    for record in trace:
        model = _apply_fixes(model, record.fixes)
    lp = solve_lp(model)
    if not lp.is_optimal:
        raise HeuristicAbortedError("replayed relaxation is infeasible", list(trace))
    return finalize(scenario, mode, model, lp.x)
