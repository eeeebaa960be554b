"""Run experiment sweeps, sequentially or on a process pool."""

from __future__ import annotations

import logging
import multiprocessing
import time
from dataclasses import dataclass

from vsn_alloc.config import Settings, load_settings
from vsn_alloc.errors import VsnError
from vsn_alloc.heuristic.rounding import RoundingHeuristic
from vsn_alloc.model.builder import build_model
from vsn_alloc.model.metrics import deployment_metrics
from vsn_alloc.model.milp import RoutingKind, RoutingMode
from vsn_alloc.model.solution import Solution
from vsn_alloc.model.validate import validate_solution
from vsn_alloc.scenario.generator import (
    BEAGLEBONE,
    TELOSB,
    GenerationParams,
    isolate,
    random_scenario,
)
from vsn_alloc.scenario.models import ApplicationKind, Scenario
from vsn_alloc.scenario.routing import build_dodag
from vsn_alloc.solver.bnb import solve_milp
from vsn_alloc.solver.stats import BnbConfig, SolverStats

from .models import ExperimentSpec, Method, MetricsRow, SweepAxis, SweepValue

logger = logging.getLogger(__name__)

VIRTUALIZATION_TAGS = ("isolated_scalar", "isolated_visual", "joint")


def routing_mode(scenario: Scenario, kind: RoutingKind) -> RoutingMode:
    if kind is RoutingKind.STATIC:
        return RoutingMode.static(build_dodag(scenario))
    if kind is RoutingKind.SINGLEPATH:
        return RoutingMode.singlepath()
    return RoutingMode.multipath()


def apply_sweep(
    params: GenerationParams,
    axis: SweepAxis,
    value: SweepValue,
) -> GenerationParams:
    """Generation parameters at one point of *axis*."""
    if axis is SweepAxis.OFFERED_APPS_PER_KIND:
        update = {"apps_per_kind": int(value)}
    elif axis is SweepAxis.NODE_MIX:
        n_multimedia = int(value)
        total = params.n_nodes
        update = {"n_multimedia": n_multimedia, "n_scalar": total - n_multimedia}
    elif axis is SweepAxis.N_SINKS:
        n = int(value)
        update = {
            "n_sinks_scalar": n if params.n_scalar else 0,
            "n_sinks_multimedia": n if params.n_multimedia else 0,
        }
    elif axis is SweepAxis.LIFETIME_DAYS:
        update = {"lifetime_days": float(value)}
    elif axis is SweepAxis.P_MAX_DBM:
        update = {"p_max_dbm": float(value)}
    else:
        return params
    return GenerationParams.model_validate({**params.model_dump(), **update})


@dataclass(frozen=True)
class SolveOutcome:
    solution: Solution
    stats: SolverStats
    mode: RoutingMode
    wall_time_s: float


def solve_scenario(
    scenario: Scenario,
    method: Method,
    routing: RoutingKind,
    seed: int,
    config: BnbConfig,
) -> SolveOutcome:
    """Solve with one concrete method; the heuristic always routes statically."""
    started = time.monotonic()
    if method is Method.HEURISTIC:
        deadline = started + config.time_limit_s if config.time_limit_s else None
        heuristic = RoundingHeuristic(scenario, seed, deadline=deadline)
        solution = heuristic.run()
        stats = SolverStats(
            lp_iterations=heuristic.state.lp_iterations,
            incumbent=solution.objective,
            wall_time_s=heuristic.state.wall_time_s,
            status=solution.status,
        )
        return SolveOutcome(solution, stats, heuristic.mode, time.monotonic() - started)
    if method is not Method.EXACT:
        raise ValueError(f"cannot solve with method {method.value}")
    mode = routing_mode(scenario, routing)
    result = solve_milp(build_model(scenario, mode), config)
    return SolveOutcome(result.solution, result.stats, mode, time.monotonic() - started)


def _row(
    scenario: Scenario,
    outcome: SolveOutcome,
    sweep_value: SweepValue,
    seed: int,
    method: Method,
) -> MetricsRow:
    metrics = deployment_metrics(scenario, outcome.solution)
    violations = validate_solution(scenario, outcome.mode, outcome.solution)
    if violations:
        logger.warning(
            "%s solution for seed %d violates %s", method.value, seed,
            ", ".join(v.tag for v in violations[:5]),
        )
    return MetricsRow(
        sweep_value=sweep_value,
        seed=seed,
        method=method,
        routing=outcome.mode.kind,
        status=outcome.solution.status.value,
        objective=metrics.objective,
        active_temperature=metrics.active_apps[ApplicationKind.TEMPERATURE],
        active_light=metrics.active_apps[ApplicationKind.LIGHT],
        active_cta=metrics.active_apps[ApplicationKind.CTA],
        active_atc=metrics.active_apps[ApplicationKind.ATC],
        active_scalar_nodes=metrics.active_scalar_nodes,
        active_multimedia_nodes=metrics.active_multimedia_nodes,
        lp_iterations=outcome.stats.lp_iterations,
        bnb_nodes=outcome.stats.bnb_nodes,
        bound=outcome.stats.bound,
        gap=outcome.stats.gap,
        violations=len(violations),
        wall_time_s=outcome.wall_time_s,
    )


def _error_row(
    sweep_value: SweepValue, seed: int, method: Method, routing: RoutingKind
) -> MetricsRow:
    return MetricsRow(
        sweep_value=sweep_value, seed=seed, method=method, routing=routing, status="error"
    )


def bnb_config(spec: ExperimentSpec, settings: Settings | None = None) -> BnbConfig:
    return BnbConfig.from_settings(
        settings or load_settings(),
        time_limit_s=spec.time_limit_s,
        node_limit=spec.node_limit,
    )


def run_point(
    spec: ExperimentSpec,
    sweep_value: SweepValue,
    seed: int,
    config: BnbConfig,
) -> list[MetricsRow]:
    """All methods of *spec* on the scenario of one (sweep value, seed)."""
    params = apply_sweep(spec.base, spec.sweep, sweep_value)
    routing = (
        RoutingKind(sweep_value) if spec.sweep is SweepAxis.ROUTING_MODE else spec.routing
    )
    scenario = random_scenario(seed, params)
    rows: list[MetricsRow] = []
    for method in spec.method.expand():
        try:
            outcome = solve_scenario(scenario, method, routing, seed, config)
        except VsnError:
            logger.exception("%s failed at %s=%s seed %d", method.value, spec.sweep.value, sweep_value, seed)
            rows.append(_error_row(sweep_value, seed, method, routing))
            continue
        rows.append(_row(scenario, outcome, sweep_value, seed, method))
    return rows


def _worker_run_point(args: tuple) -> list[MetricsRow]:
    """Top-level worker for multiprocessing (must be picklable)."""
    spec_json, sweep_value, seed, config_json = args
    spec = ExperimentSpec.model_validate_json(spec_json)
    config = BnbConfig.model_validate_json(config_json)
    return run_point(spec, sweep_value, seed, config)


def _canonical(spec: ExperimentSpec, rows: list[MetricsRow]) -> list[MetricsRow]:
    position = {str(v): n for n, v in enumerate(spec.sweep_values)}
    methods = {m: n for n, m in enumerate(spec.method.expand())}
    return sorted(rows, key=lambda r: (position[str(r.sweep_value)], r.seed, methods[r.method]))


def run_experiment(
    spec: ExperimentSpec,
    settings: Settings | None = None,
) -> list[MetricsRow]:
    """Every sweep value x replication x method, in canonical order.

    Replication ``r`` uses seed ``base_seed + r``.  With ``workers > 1`` the
    points run on a process pool; output order does not depend on it.
    """
    config = bnb_config(spec, settings)
    points = [(value, seed) for value in spec.sweep_values for seed in spec.seeds()]
    logger.info(
        "experiment %s: %d points x %d method(s), %d worker(s)",
        spec.name, len(points), len(spec.method.expand()), spec.workers,
    )
    if spec.workers > 1 and len(points) > 1:
        work = [
            (spec.model_dump_json(), value, seed, config.model_dump_json())
            for value, seed in points
        ]
        n_workers = min(spec.workers, len(points), multiprocessing.cpu_count() or 1)
        with multiprocessing.Pool(processes=n_workers) as pool:
            batches = pool.map(_worker_run_point, work)
    else:
        batches = [run_point(spec, value, seed, config) for value, seed in points]
    return _canonical(spec, [row for batch in batches for row in batch])


def run_virtualization(
    params: GenerationParams,
    seeds: list[int],
    config: BnbConfig | None = None,
    routing: RoutingKind = RoutingKind.MULTIPATH,
) -> list[MetricsRow]:
    """Exact optima of the scalar-only, visual-only and joint networks per seed.

    Rows are tagged through ``sweep_value`` with ``isolated_scalar``,
    ``isolated_visual`` and ``joint``.  A variant that cannot be built or
    solved, such as a slice without a sink, becomes an ``error`` row.
    """
    config = config or BnbConfig()
    scalar_kinds = [k for k in ApplicationKind if not k.is_visual]
    visual_kinds = [k for k in ApplicationKind if k.is_visual]
    rows: list[MetricsRow] = []
    for seed in seeds:
        joint = random_scenario(seed, params)
        variants = (
            lambda: isolate(joint, [TELOSB], scalar_kinds),
            lambda: isolate(joint, [BEAGLEBONE], visual_kinds),
            lambda: joint,
        )
        for tag, make in zip(VIRTUALIZATION_TAGS, variants):
            try:
                scenario = make()
                outcome = solve_scenario(scenario, Method.EXACT, routing, seed, config)
            except VsnError as exc:
                logger.warning("%s variant failed for seed %d: %s", tag, seed, exc)
                rows.append(_error_row(tag, seed, Method.EXACT, routing))
                continue
            rows.append(_row(scenario, outcome, tag, seed, Method.EXACT))
    return rows
