"""LP-based branch and bound for the allocation MILP.

Each node is a set of tightened column bounds; its LP relaxation (solved
with :mod:`vsn_alloc.solver.simplex`) gives an upper bound.  Nodes whose
bound cannot beat the incumbent by more than the gap tolerance are pruned.
Branching splits on one fractional integral column, chosen either as the
most fractional or by pseudocost score.  The search is single-threaded and
every choice is tie-broken by column index, so identical inputs replay
identically.
"""

from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from vsn_alloc.errors import ModelError
from vsn_alloc.model.milp import LpArrays, MilpModel
from vsn_alloc.model.solution import Solution, SolutionStatus

from .simplex import LpStatus, solve_arrays
from .stats import BnbConfig, BranchingRule, SearchOrder, SolverStats, relative_gap

logger = logging.getLogger(__name__)

# Floor on pseudocost score factors.
_SCORE_FLOOR = 1e-6


@dataclass
class MilpResult:
    solution: Solution
    stats: SolverStats
    bound_trace: list[float] = field(default_factory=list)
    """Global upper bound each time a node was taken off the queue."""


@dataclass
class _Node:
    bound: float
    depth: int
    lower: np.ndarray
    upper: np.ndarray
    branched: tuple[int, float, float] | None = None
    """(column, change applied to it, parent LP objective)."""


class PseudoCosts:
    """Running averages of objective loss per unit change, per column and side.

    Columns without observations on a side use the global average of that
    side (1.0 before anything has been observed).
    """

    def __init__(self, n: int) -> None:
        self.count_up = np.zeros(n, dtype=int)
        self.count_down = np.zeros(n, dtype=int)
        self.sum_up = np.zeros(n)
        self.sum_down = np.zeros(n)

    def update(self, col: int, delta: float, obj_loss: float) -> None:
        if delta > 0:
            self.count_up[col] += 1
            self.sum_up[col] += obj_loss / delta
        elif delta < 0:
            self.count_down[col] += 1
            self.sum_down[col] += obj_loss / -delta

    @staticmethod
    def _costs(count: np.ndarray, total: np.ndarray) -> np.ndarray:
        seen = count > 0
        default = total[seen].sum() / count[seen].sum() if seen.any() else 1.0
        out = np.full(count.shape, default, dtype=float)
        out[seen] = total[seen] / count[seen]
        return out

    def scores(self, cols: np.ndarray, x: np.ndarray) -> np.ndarray:
        up = self._costs(self.count_up, self.sum_up)[cols]
        down = self._costs(self.count_down, self.sum_down)[cols]
        frac_down = x[cols] - np.floor(x[cols])
        frac_up = np.ceil(x[cols]) - x[cols]
        return np.maximum(down * frac_down, _SCORE_FLOOR) * np.maximum(up * frac_up, _SCORE_FLOOR)


def _zero_start(arrays: LpArrays) -> np.ndarray | None:
    """The all-zero assignment, if it lies in the bounds and satisfies every row."""
    if np.any(arrays.lower > 0) or np.any(arrays.upper < 0):
        return None
    activity = np.zeros(arrays.b.size)
    ok = np.where(
        arrays.sense < 0,
        activity <= arrays.b + 1e-9,
        np.where(arrays.sense > 0, activity >= arrays.b - 1e-9, np.abs(arrays.b) <= 1e-9),
    )
    return np.zeros(arrays.c.size) if ok.all() else None


class BranchAndBound:
    """One search over one model; see :func:`solve_milp`."""

    def __init__(self, model: MilpModel, config: BnbConfig) -> None:
        self.model = model
        self.config = config
        self.arrays = model.to_arrays()
        self.int_cols = np.flatnonzero(self.arrays.integral)
        self.pseudo = PseudoCosts(model.n_vars)
        self.incumbent: np.ndarray | None = None
        self.incumbent_obj: float | None = None
        self.lp_iterations = 0
        self.nodes = 0
        self.bound_trace: list[float] = []
        self._seq = 0
        self._open: list = []

    # -- queue ---------------------------------------------------------------

    def _push(self, node: _Node) -> None:
        self._seq += 1
        if self.config.search is SearchOrder.BEST_FIRST:
            heapq.heappush(self._open, (-node.bound, self._seq, node))
        else:
            self._open.append((-node.bound, self._seq, node))

    def _pop(self) -> _Node:
        if self.config.search is SearchOrder.BEST_FIRST:
            return heapq.heappop(self._open)[2]
        return self._open.pop()[2]

    def _open_bound(self) -> float | None:
        if not self._open:
            return None
        return max(-entry[0] for entry in self._open)

    # -- helpers -------------------------------------------------------------

    def _prunable(self, bound: float) -> bool:
        if self.incumbent_obj is None:
            return False
        return bound <= self.incumbent_obj + self.config.gap_tol * max(1.0, abs(self.incumbent_obj))

    def _fractional(self, x: np.ndarray) -> np.ndarray:
        vals = x[self.int_cols]
        return self.int_cols[np.abs(vals - np.round(vals)) > self.config.integrality_tol]

    def _choose(self, frac: np.ndarray, x: np.ndarray) -> int:
        if self.config.branching is BranchingRule.PSEUDO_COST:
            score = self.pseudo.scores(frac, x)
        else:
            score = np.minimum(x[frac] - np.floor(x[frac]), np.ceil(x[frac]) - x[frac])
        return int(frac[int(np.argmax(score))])

    def _accept(self, x: np.ndarray, node: _Node, deadline: float | None) -> None:
        """Turn an integral LP point into an incumbent candidate."""
        rounded = x.copy()
        rounded[self.int_cols] = np.round(x[self.int_cols])
        if np.abs(rounded - x).max(initial=0.0) > 1e-9:
            # Re-solve the continuous part with the integers pinned.
            lower = node.lower.copy()
            upper = node.upper.copy()
            lower[self.int_cols] = rounded[self.int_cols]
            upper[self.int_cols] = rounded[self.int_cols]
            polish = solve_arrays(self.arrays, lower, upper, deadline=deadline)
            self.lp_iterations += polish.iterations
            if polish.is_optimal:
                rounded = polish.x
                rounded[self.int_cols] = np.round(rounded[self.int_cols])
            else:
                logger.warning("polishing an integral point failed (%s)", polish.status.value)
        obj = float(self.arrays.c @ rounded)
        if self.incumbent_obj is None or obj > self.incumbent_obj:
            logger.debug("new incumbent %.9g at node %d", obj, self.nodes)
            self.incumbent = rounded
            self.incumbent_obj = obj

    # -- search --------------------------------------------------------------

    def run(self) -> MilpResult:
        cfg = self.config
        started = time.monotonic()
        deadline = started + cfg.time_limit_s if cfg.time_limit_s else None

        start = _zero_start(self.arrays)
        if start is not None:
            self.incumbent = start
            self.incumbent_obj = float(self.arrays.c @ start)

        self._push(_Node(np.inf, 0, self.arrays.lower.copy(), self.arrays.upper.copy()))
        proven_infeasible = False
        limit_hit = False
        pending_bound: float | None = None

        while self._open:
            if self.nodes >= cfg.node_limit:
                limit_hit = True
                break
            open_bound = self._open_bound()
            node = self._pop()
            if node.bound != np.inf and open_bound is not None:
                self.bound_trace.append(open_bound)
            if self._prunable(node.bound):
                continue

            lp = solve_arrays(self.arrays, node.lower, node.upper, deadline=deadline)
            self.lp_iterations += lp.iterations
            if lp.status is LpStatus.TIME_LIMIT:
                limit_hit = True
                pending_bound = node.bound
                break
            if lp.status is LpStatus.UNBOUNDED:
                raise ModelError("LP relaxation is unbounded")
            self.nodes += 1
            if not lp.is_optimal:
                if node.depth == 0:
                    proven_infeasible = True
                continue

            if node.branched is not None:
                col, delta, parent_obj = node.branched
                self.pseudo.update(col, delta, max(0.0, parent_obj - lp.objective))
            if self._prunable(lp.objective):
                continue

            frac = self._fractional(lp.x)
            if frac.size == 0:
                self._accept(lp.x, node, deadline)
                continue

            col = self._choose(frac, lp.x)
            value = lp.x[col]
            down_upper = node.upper.copy()
            down_upper[col] = np.floor(value)
            up_lower = node.lower.copy()
            up_lower[col] = np.ceil(value)
            down = _Node(lp.objective, node.depth + 1, node.lower, down_upper,
                         (col, np.floor(value) - value, lp.objective))
            up = _Node(lp.objective, node.depth + 1, up_lower, node.upper,
                       (col, np.ceil(value) - value, lp.objective))
            self._push(down)
            self._push(up)

        return self._result(started, proven_infeasible, limit_hit, pending_bound)

    def _result(
        self,
        started: float,
        proven_infeasible: bool,
        limit_hit: bool,
        pending_bound: float | None,
    ) -> MilpResult:
        if self.incumbent is None:
            status = (
                SolutionStatus.INFEASIBLE
                if proven_infeasible or not limit_hit
                else SolutionStatus.NO_INCUMBENT
            )
            solution = Solution.infeasible(status)
        else:
            status = SolutionStatus.FEASIBLE if limit_hit else SolutionStatus.OPTIMAL
            solution = Solution.from_array(self.model, self.incumbent, status)

        if limit_hit:
            candidates = [b for b in (self._open_bound(), pending_bound) if b is not None]
            bound = max(candidates) if candidates else self.incumbent_obj
            if bound is not None and self.incumbent_obj is not None:
                bound = max(bound, self.incumbent_obj)
            if bound == np.inf:
                bound = None
        else:
            bound = self.incumbent_obj

        stats = SolverStats(
            lp_iterations=self.lp_iterations,
            bnb_nodes=self.nodes,
            incumbent=self.incumbent_obj,
            bound=bound,
            gap=relative_gap(self.incumbent_obj, bound),
            wall_time_s=time.monotonic() - started,
            status=status,
        )
        logger.info(
            "branch and bound: %s, incumbent=%s bound=%s after %d nodes / %d LP iterations",
            status.value, self.incumbent_obj, bound, self.nodes, self.lp_iterations,
        )
        return MilpResult(solution=solution, stats=stats, bound_trace=self.bound_trace)


def solve_milp(model: MilpModel, config: BnbConfig | None = None) -> MilpResult:
    """Solve *model* to optimality within the gap tolerance, or until a limit.

    Returns the best integral assignment found with its proven bound.  When a
    limit stops the search before any assignment is known the status is
    ``NO_INCUMBENT``, which is distinct from a proven ``INFEASIBLE``.
    """
    return BranchAndBound(model, config or BnbConfig()).run()
