"""Bounded-variable primal simplex on dense numpy arrays.

Problem form::

    maximise    c @ x
    subject to  a[r] @ x  (<=, =, >=)  b[r]
                lower <= x <= upper

Every row gets a logical column so the system becomes ``[A | I] (x, s) = b``
with the logical bounds encoding the row sense.  Rows whose logical cannot
start inside its bounds get an artificial column, and a first phase drives
the artificials to zero.  Pricing is Dantzig's rule; after a streak of
degenerate pivots the entering choice falls back to Bland's lowest-index
rule until a pivot makes progress again.  The basis inverse is kept
explicitly, updated per pivot, and rebuilt from scratch periodically.

Columns whose bounds coincide are folded into the right-hand side before
solving, and the remaining matrix is scaled by powers of two so that
big-M rows and per-bit energy rows end up on comparable magnitudes.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from vsn_alloc.errors import ModelError, NumericalBreakdownError
from vsn_alloc.model.milp import LpArrays, MilpModel

logger = logging.getLogger(__name__)


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    TIME_LIMIT = "time_limit"


@dataclass(frozen=True)
class LpTolerances:
    primal: float = 1e-9
    """Bound slack below which a basic variable counts as feasible (scaled)."""

    dual: float = 1e-9
    """Reduced-cost threshold for optimality (scaled)."""

    pivot: float = 1e-9
    """Smallest column entry accepted as a pivot."""

    verify: float = 1e-7
    """Relative residual allowed when re-checking the unscaled answer."""

    degenerate_streak: int = 200
    refactor_every: int = 100
    max_condition: float = 1e14


DEFAULT_TOLERANCES = LpTolerances()


@dataclass
class LpResult:
    status: LpStatus
    x: np.ndarray | None
    objective: float
    iterations: int

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL

    def values(self, model: MilpModel) -> dict[str, float]:
        if self.x is None:
            return {}
        return model.values_by_name(self.x)


# =====================================================================
# Scaling
# =====================================================================

def _pow2(v: np.ndarray) -> np.ndarray:
    return np.exp2(np.round(np.log2(v)))


def geometric_scaling(a: np.ndarray, passes: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Row and column factors (powers of two) for ``diag(r) @ a @ diag(s)``."""
    m, n = a.shape
    row = np.ones(m)
    col = np.ones(n)
    mag = np.abs(a)
    nz = mag > 0
    if not nz.any():
        return row, col
    for _ in range(passes):
        scaled = mag * row[:, None] * col[None, :]
        big = np.where(nz, scaled, 0.0).max(axis=1)
        small = np.where(nz, scaled, np.inf).min(axis=1)
        has = big > 0
        row[has] *= _pow2(1.0 / np.sqrt(big[has] * small[has]))

        scaled = mag * row[:, None] * col[None, :]
        big = np.where(nz, scaled, 0.0).max(axis=0)
        small = np.where(nz, scaled, np.inf).min(axis=0)
        has = big > 0
        col[has] *= _pow2(1.0 / np.sqrt(big[has] * small[has]))
    return row, col


# =====================================================================
# Core iteration
# =====================================================================

class _Simplex:
    """Primal simplex over ``mat @ x = rhs`` with ``lo <= x <= hi``.

    The caller supplies a starting basis whose basic values lie inside their
    bounds; nonbasic values sit on a finite bound (or at 0 when free).
    """

    def __init__(
        self,
        mat: np.ndarray,
        rhs: np.ndarray,
        lo: np.ndarray,
        hi: np.ndarray,
        x: np.ndarray,
        basic: np.ndarray,
        binv: np.ndarray,
        tol: LpTolerances,
        deadline: float | None,
        max_iter: int,
    ) -> None:
        self.mat = mat
        self.rhs = rhs
        self.lo = lo
        self.hi = hi
        self.x = x
        self.basic = basic
        self.binv = binv
        self.is_basic = np.zeros(mat.shape[1], dtype=bool)
        self.is_basic[basic] = True
        self.tol = tol
        self.deadline = deadline
        self.max_iter = max_iter
        self.iterations = 0
        self._since_refactor = 0

    # -- basis maintenance ---------------------------------------------------

    def refactor(self) -> None:
        """Rebuild the basis inverse and recompute the basic values."""
        m = self.mat.shape[0]
        if m == 0:
            return
        bmat = self.mat[:, self.basic]
        try:
            binv = np.linalg.inv(bmat)
        except np.linalg.LinAlgError:
            raise NumericalBreakdownError(
                "singular basis", {"iteration": self.iterations, "cond": float("inf")}
            ) from None
        cond = float(np.linalg.norm(bmat, 1) * np.linalg.norm(binv, 1))
        if not np.isfinite(cond) or cond > self.tol.max_condition:
            raise NumericalBreakdownError(
                "ill-conditioned basis",
                {"iteration": self.iterations, "cond": f"{cond:.3e}"},
            )
        self.binv = binv
        nonbasic = ~self.is_basic
        self.x[self.basic] = binv @ (self.rhs - self.mat[:, nonbasic] @ self.x[nonbasic])
        self._since_refactor = 0

    def _pivot(self, p: int, q: int, alpha: np.ndarray) -> None:
        row_p = self.binv[p] / alpha[p]
        self.binv -= np.outer(alpha, row_p)
        self.binv[p] = row_p
        self.is_basic[self.basic[p]] = False
        self.basic[p] = q
        self.is_basic[q] = True
        self._since_refactor += 1
        if self._since_refactor >= self.tol.refactor_every:
            self.refactor()

    # -- main loop -----------------------------------------------------------

    def run(self, cost: np.ndarray) -> LpStatus:
        tol = self.tol
        degenerate = 0
        bland = False
        while True:
            if self.iterations >= self.max_iter:
                raise NumericalBreakdownError(
                    "simplex iteration limit reached",
                    {"iterations": self.iterations, "degenerate_streak": degenerate},
                )
            if self.deadline is not None and time.monotonic() > self.deadline:
                return LpStatus.TIME_LIMIT

            duals = cost[self.basic] @ self.binv
            d = cost - duals @ self.mat
            d[self.is_basic] = 0.0
            room_up = (self.hi - self.x) > tol.primal
            room_down = (self.x - self.lo) > tol.primal
            eligible = ~self.is_basic & (
                ((d > tol.dual) & room_up) | ((d < -tol.dual) & room_down)
            )
            if not eligible.any():
                return LpStatus.OPTIMAL

            if bland:
                q = int(np.flatnonzero(eligible)[0])
            else:
                q = int(np.argmax(np.where(eligible, np.abs(d), -1.0)))
            direction = 1.0 if d[q] > 0 else -1.0

            alpha = self.binv @ self.mat[:, q]
            rate = -direction * alpha
            xb = self.x[self.basic]
            steps = np.full(alpha.shape[0], np.inf)
            dec = rate < -tol.pivot
            inc = rate > tol.pivot
            steps[dec] = (xb[dec] - self.lo[self.basic][dec]) / -rate[dec]
            steps[inc] = (self.hi[self.basic][inc] - xb[inc]) / rate[inc]
            np.maximum(steps, 0.0, out=steps)

            t_row = float(steps.min()) if steps.size else np.inf
            t_flip = float(self.hi[q] - self.lo[q])
            if not np.isfinite(t_row) and not np.isfinite(t_flip):
                return LpStatus.UNBOUNDED
            self.iterations += 1

            if t_flip <= t_row:
                self.x[self.basic] += rate * t_flip
                self.x[q] = self.hi[q] if direction > 0 else self.lo[q]
                degenerate = 0
                bland = False
                continue

            # Among the rows that block first, prefer the largest pivot.
            blocking = np.flatnonzero(steps <= t_row + tol.primal)
            if bland:
                p = int(blocking[np.argmin(self.basic[blocking])])
            else:
                p = int(blocking[np.argmax(np.abs(alpha[blocking]))])

            leaving = int(self.basic[p])
            self.x[self.basic] += rate * t_row
            self.x[q] += direction * t_row
            self.x[leaving] = self.lo[leaving] if rate[p] < 0 else self.hi[leaving]
            self._pivot(p, q, alpha)

            if t_row <= tol.primal:
                degenerate += 1
                if degenerate >= tol.degenerate_streak and not bland:
                    logger.debug("degenerate streak at iteration %d, using Bland's rule", self.iterations)
                    bland = True
            else:
                degenerate = 0
                bland = False


# =====================================================================
# Two-phase driver
# =====================================================================

def _starting_value(lo: float, hi: float) -> float:
    if np.isfinite(lo):
        return lo
    if np.isfinite(hi):
        return hi
    return 0.0


def _solve_standard(
    a: np.ndarray,
    sense: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    tol: LpTolerances,
    deadline: float | None,
) -> tuple[LpStatus, np.ndarray | None, int]:
    m, n = a.shape
    slack_lo = np.where(sense > 0, -np.inf, 0.0)
    slack_hi = np.where(sense < 0, np.inf, 0.0)

    x_struct = np.array([_starting_value(l, h) for l, h in zip(lo, hi)], dtype=float)
    residual = b - a @ x_struct
    slack = np.clip(residual, slack_lo, slack_hi)
    gap = residual - slack
    art_rows = np.flatnonzero(np.abs(gap) > tol.primal)
    n_art = art_rows.size
    signs = np.sign(gap[art_rows])

    art = np.zeros((m, n_art))
    art[art_rows, np.arange(n_art)] = signs
    mat = np.hstack([a, np.eye(m), art])
    lo_all = np.concatenate([lo, slack_lo, np.zeros(n_art)])
    hi_all = np.concatenate([hi, slack_hi, np.full(n_art, np.inf)])
    x = np.concatenate([x_struct, slack, np.abs(gap[art_rows])])

    basic = np.arange(n, n + m)
    basic[art_rows] = n + m + np.arange(n_art)
    binv = np.eye(m)
    binv[art_rows, art_rows] = signs

    max_iter = 50 * (m + n + n_art) + 1000
    core = _Simplex(mat, b, lo_all, hi_all, x, basic, binv, tol, deadline, max_iter)

    if n_art:
        phase1 = np.zeros(mat.shape[1])
        phase1[n + m:] = -1.0
        status = core.run(phase1)
        if status is LpStatus.TIME_LIMIT:
            return status, None, core.iterations
        core.refactor()
        infeasibility = float(core.x[n + m:].sum())
        if infeasibility > 1e2 * tol.primal * max(1.0, float(np.abs(b).max(initial=0.0))):
            logger.debug("phase 1 ended with infeasibility %.3e", infeasibility)
            return LpStatus.INFEASIBLE, None, core.iterations
        _drive_out_artificials(core, n + m, tol)
        core.hi[n + m:] = 0.0
        core.x[n + m:] = 0.0
        core.refactor()

    cost = np.zeros(mat.shape[1])
    cost[:n] = c
    status = core.run(cost)
    if status is not LpStatus.OPTIMAL:
        return status, None, core.iterations
    core.refactor()
    return status, core.x[:n].copy(), core.iterations


def _drive_out_artificials(core: _Simplex, first_art: int, tol: LpTolerances) -> None:
    """Pivot zero-valued artificials out of the basis where a column allows."""
    for p in range(core.basic.size):
        if core.basic[p] < first_art:
            continue
        row = core.binv[p] @ core.mat[:, :first_art]
        row[core.is_basic[:first_art]] = 0.0
        q = int(np.argmax(np.abs(row)))
        if abs(row[q]) <= 1e3 * tol.pivot:
            continue  # redundant row; the artificial stays basic at zero
        alpha = core.binv @ core.mat[:, q]
        leaving = int(core.basic[p])
        core.x[leaving] = 0.0
        core._pivot(p, q, alpha)


# =====================================================================
# Public entry points
# =====================================================================

def _row_ok(activity: float, sense: int, rhs: float, slack: float) -> bool:
    if sense < 0:
        return activity <= rhs + slack
    if sense > 0:
        return activity >= rhs - slack
    return abs(activity - rhs) <= slack


def _verify(arrays: LpArrays, x: np.ndarray, lower: np.ndarray, upper: np.ndarray, tol: LpTolerances) -> None:
    activity = arrays.a @ x
    magnitude = np.abs(arrays.a) @ np.abs(x)
    for r in range(arrays.b.size):
        slack = tol.verify * max(1.0, abs(arrays.b[r]), magnitude[r])
        if not _row_ok(activity[r], arrays.sense[r], arrays.b[r], slack):
            raise NumericalBreakdownError(
                "LP answer fails verification",
                {"row": r, "activity": float(activity[r]), "rhs": float(arrays.b[r])},
            )
    span = tol.verify * np.maximum(1.0, np.abs(x))
    if np.any(x < lower - span) or np.any(x > upper + span):
        raise NumericalBreakdownError("LP answer violates variable bounds", {})


def solve_arrays(
    arrays: LpArrays,
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
    *,
    deadline: float | None = None,
    tolerances: LpTolerances = DEFAULT_TOLERANCES,
) -> LpResult:
    """Solve the LP in *arrays*, optionally under overriding bounds.

    Parameters
    ----------
    arrays:
        Dense problem data; integrality flags are ignored.
    lower, upper:
        Column bounds replacing ``arrays.lower`` / ``arrays.upper``.
    deadline:
        ``time.monotonic()`` instant after which the solve gives up with
        :attr:`LpStatus.TIME_LIMIT`.
    """
    lower = arrays.lower if lower is None else lower
    upper = arrays.upper if upper is None else upper
    n = arrays.c.size
    if np.any(lower > upper + 1e-12):
        return LpResult(LpStatus.INFEASIBLE, None, 0.0, 0)

    fixed = lower >= upper
    free = np.flatnonzero(~fixed)
    x = np.where(fixed, lower, 0.0)
    rhs = arrays.b - arrays.a[:, fixed] @ lower[fixed]
    sub = arrays.a[:, free]

    keep = np.abs(sub).max(axis=1, initial=0.0) > 0
    for r in np.flatnonzero(~keep):
        if not _row_ok(0.0, arrays.sense[r], rhs[r], 1e-9 * max(1.0, abs(arrays.b[r]))):
            return LpResult(LpStatus.INFEASIBLE, None, 0.0, 0)

    iterations = 0
    if free.size:
        a = sub[keep]
        row_s, col_s = geometric_scaling(a)
        a_scaled = a * row_s[:, None] * col_s[None, :]
        status, xs, iterations = _solve_standard(
            a_scaled,
            arrays.sense[keep],
            rhs[keep] * row_s,
            arrays.c[free] * col_s,
            lower[free] / col_s,
            upper[free] / col_s,
            tolerances,
            deadline,
        )
        if status is not LpStatus.OPTIMAL:
            return LpResult(status, None, 0.0, iterations)
        x[free] = np.clip(xs * col_s, lower[free], upper[free])

    _verify(arrays, x, lower, upper, tolerances)
    objective = float(arrays.c @ x)
    logger.debug("LP solved: objective %.9g after %d iterations (%d columns)", objective, iterations, n)
    return LpResult(LpStatus.OPTIMAL, x, objective, iterations)


def solve_lp(
    model: MilpModel,
    *,
    deadline: float | None = None,
    tolerances: LpTolerances = DEFAULT_TOLERANCES,
) -> LpResult:
    """Solve a continuous model.

    Raises
    ------
    ModelError
        If any variable still carries an integrality flag; relax first.
    NumericalBreakdownError
        If the simplex loses numerical control.
    """
    if model.is_integral:
        raise ModelError("solve_lp needs a relaxed model; call relax() first")
    return solve_arrays(model.to_arrays(), deadline=deadline, tolerances=tolerances)
