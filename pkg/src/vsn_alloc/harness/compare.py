"""Pair exact and heuristic rows and measure the optimality gap."""

from __future__ import annotations

import logging
from statistics import fmean

from vsn_alloc.model.solution import SolutionStatus

from .models import GapPoint, GapSummary, Method, MetricsRow

logger = logging.getLogger(__name__)

_USABLE = {SolutionStatus.OPTIMAL.value, SolutionStatus.FEASIBLE.value}


def relative_objective_gap(exact: float, heuristic: float) -> float:
    """``(exact - heuristic) / exact``; 0 when the exact optimum is 0."""
    if abs(exact) < 1e-9:
        return 0.0
    return (exact - heuristic) / exact


def compare_methods(rows: list[MetricsRow]) -> GapSummary:
    """Gap per (sweep value, seed) and over the whole table.

    Pairs where either method is absent or produced no usable solution are
    listed in ``missing`` and left out of the aggregates.
    """
    exact: dict[tuple[str, int], MetricsRow] = {}
    heuristic: dict[tuple[str, int], MetricsRow] = {}
    order: list[tuple[str, int]] = []
    for row in rows:
        key = (str(row.sweep_value), row.seed)
        if key not in exact and key not in heuristic:
            order.append(key)
        if row.method is Method.EXACT:
            exact[key] = row
        elif row.method is Method.HEURISTIC:
            heuristic[key] = row

    summary = GapSummary()
    for key in order:
        ex, he = exact.get(key), heuristic.get(key)
        if ex is None or he is None or ex.status not in _USABLE or he.status not in _USABLE:
            summary.missing.append(key)
            continue
        ratio = he.wall_time_s / ex.wall_time_s if ex.wall_time_s > 0 else None
        summary.points.append(
            GapPoint(
                sweep_value=ex.sweep_value,
                seed=ex.seed,
                exact=ex.objective,
                heuristic=he.objective,
                gap=relative_objective_gap(ex.objective, he.objective),
                time_ratio=ratio,
            )
        )

    if summary.missing:
        logger.warning("%d point(s) lack a usable exact/heuristic pair", len(summary.missing))
    if summary.points:
        gaps = [p.gap for p in summary.points]
        summary.mean_gap = fmean(gaps)
        summary.min_gap = min(gaps)
        summary.max_gap = max(gaps)
        ratios = [p.time_ratio for p in summary.points if p.time_ratio is not None]
        if ratios:
            summary.mean_time_ratio = fmean(ratios)
            summary.heuristic_faster_fraction = sum(r < 1.0 for r in ratios) / len(ratios)
    return summary
