"""Human-readable summary of a sweep."""

from __future__ import annotations

from statistics import fmean

from .compare import compare_methods
from .models import Method, MetricsRow


def _group(rows: list[MetricsRow]) -> dict[tuple[str, Method], list[MetricsRow]]:
    groups: dict[tuple[str, Method], list[MetricsRow]] = {}
    for row in rows:
        groups.setdefault((str(row.sweep_value), row.method), []).append(row)
    return groups


def _stopped_early(row: MetricsRow) -> bool:
    # A heuristic answer is "feasible" by construction.
    if row.status in ("error", "no_incumbent"):
        return True
    return row.method is Method.EXACT and row.status == "feasible"


def generate_text_report(rows: list[MetricsRow], title: str = "sweep") -> str:
    """Per sweep value and method: objective spread and mean deployment counts."""
    lines: list[str] = []
    lines.append("=" * 72)
    lines.append(f"Sweep report: {title}")
    lines.append(f"Rows: {len(rows)}")
    lines.append("=" * 72)

    lines.append("")
    lines.append("## Objective and deployment (means over replications)")
    lines.append(
        f"  {'value':>10s} {'method':>10s} {'n':>3s} {'obj mean':>9s} {'min':>8s} {'max':>8s}"
        f" {'temp':>5s} {'light':>5s} {'cta':>5s} {'atc':>5s} {'scal.n':>6s} {'mm.n':>5s}"
    )
    for (value, method), group in _group(rows).items():
        ok = [r for r in group if r.status != "error"]
        if not ok:
            lines.append(f"  {value:>10s} {method.value:>10s} {len(group):3d}  (all errors)")
            continue
        objs = [r.objective for r in ok]
        lines.append(
            f"  {value:>10s} {method.value:>10s} {len(ok):3d}"
            f" {fmean(objs):9.3f} {min(objs):8.3f} {max(objs):8.3f}"
            f" {fmean(r.active_temperature for r in ok):5.2f}"
            f" {fmean(r.active_light for r in ok):5.2f}"
            f" {fmean(r.active_cta for r in ok):5.2f}"
            f" {fmean(r.active_atc for r in ok):5.2f}"
            f" {fmean(r.active_scalar_nodes for r in ok):6.2f}"
            f" {fmean(r.active_multimedia_nodes for r in ok):5.2f}"
        )

    limited = [r for r in rows if _stopped_early(r)]
    if limited:
        lines.append("")
        lines.append(f"## Rows stopped by a limit or error: {len(limited)}")
        for r in limited[:10]:
            lines.append(f"  value={r.sweep_value} seed={r.seed} {r.method.value}: {r.status}")

    if any(r.method is Method.HEURISTIC for r in rows) and any(
        r.method is Method.EXACT for r in rows
    ):
        summary = compare_methods(rows)
        lines.append("")
        lines.append("## Heuristic vs exact")
        if summary.mean_gap is not None:
            lines.append(f"  Mean gap:  {summary.mean_gap:.2%}")
            lines.append(f"  Gap range: {summary.min_gap:.2%} .. {summary.max_gap:.2%}")
        if summary.mean_time_ratio is not None:
            lines.append(f"  Mean time ratio (heuristic / exact): {summary.mean_time_ratio:.3f}")
        if summary.missing:
            lines.append(f"  Unpaired points: {len(summary.missing)}")

    lines.append("")
    return "\n".join(lines)
