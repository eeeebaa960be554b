"""``vsn-alloc`` command line: gen, solve, sweep, validate.

Exit status is 0 on success, 1 when a solve is infeasible or a solution
violates constraints, and 2 for usage errors and malformed input files.
"""

from __future__ import annotations

import json
import logging
import time
from enum import Enum
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from vsn_alloc.config import ENV_NODE_LIMIT, ENV_TIME_LIMIT, load_settings
from vsn_alloc.errors import ConfigurationError, VsnError
from vsn_alloc.harness.io import load_spec, write_sweep_outputs
from vsn_alloc.harness.models import Method
from vsn_alloc.harness.report import generate_text_report
from vsn_alloc.harness.runner import routing_mode, run_experiment, solve_scenario
from vsn_alloc.heuristic.rounding import RoundingHeuristic
from vsn_alloc.heuristic.trace import write_trace_jsonl
from vsn_alloc.model.builder import build_model
from vsn_alloc.model.lp_format import write_lp
from vsn_alloc.model.metrics import deployment_metrics
from vsn_alloc.model.milp import RoutingKind
from vsn_alloc.model.solution import Solution, load_solution, save_solution
from vsn_alloc.model.validate import validate_solution
from vsn_alloc.scenario.generator import GenerationParams, PreferenceProfile, random_scenario
from vsn_alloc.scenario.loader import load_scenario, scenario_to_json
from vsn_alloc.scenario.models import Scenario
from vsn_alloc.solver.stats import BnbConfig, BranchingRule, SearchOrder

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="vsn-alloc",
    help="Resource allocation for virtual sensor networks.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class SolveMethod(str, Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _configure_logging(verbose: int) -> None:
    level = load_settings().log_level
    if verbose == 1:
        level = "INFO"
    elif verbose >= 2:
        level = "DEBUG"
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _input_error(path: Path, exc: Exception) -> typer.Exit:
    """Report a malformed or missing input file and return the exit to raise."""
    if isinstance(exc, ValidationError):
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "<root>"
            err_console.print(f"[red]{path}[/red]: {loc}: {err['msg']}")
    elif isinstance(exc, json.JSONDecodeError):
        err_console.print(f"[red]{path}[/red]: line {exc.lineno} column {exc.colno}: {exc.msg}")
    else:
        err_console.print(f"[red]{path}[/red]: {exc}")
    return typer.Exit(EXIT_USAGE)


def _read_scenario(path: Path) -> Scenario:
    try:
        return load_scenario(path)
    except (ValidationError, json.JSONDecodeError, OSError, VsnError) as exc:
        raise _input_error(path, exc) from exc


def _read_solution(path: Path) -> Solution:
    try:
        return load_solution(path)
    except (ValidationError, json.JSONDecodeError, OSError) as exc:
        raise _input_error(path, exc) from exc


def _summary_table(scenario: Scenario, solution: Solution, title: str) -> Table:
    metrics = deployment_metrics(scenario, solution)
    table = Table(title=title)
    table.add_column("Quantity")
    table.add_column("Value", justify="right")
    table.add_row("status", solution.status.value)
    table.add_row("objective", f"{metrics.objective:.6g}")
    for kind, count in metrics.active_apps.items():
        table.add_row(f"active {kind.value} apps", str(count))
    for profile, count in metrics.active_nodes.items():
        table.add_row(f"active {profile} nodes", str(count))
    table.add_row("sink delivery (bps)", f"{metrics.sink_delivery_bps:.6g}")
    return table


@app.callback()
def main(
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v info, -vv debug."),
) -> None:
    _configure_logging(verbose)


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

@app.command()
def gen(
    seed: int = typer.Option(0, "--seed", help="Master seed."),
    n_scalar: int = typer.Option(12, "--n-scalar", help="TelosB motes."),
    n_multimedia: int = typer.Option(12, "--n-multimedia", help="BeagleBone camera nodes."),
    sinks: int = typer.Option(1, "--sinks", help="Sinks of each node type."),
    apps_per_kind: int = typer.Option(1, "--apps-per-kind"),
    p_max_dbm: float = typer.Option(0.0, "--p-max-dbm"),
    lifetime_days: float = typer.Option(1.0, "--lifetime-days"),
    preference: PreferenceProfile = typer.Option(PreferenceProfile.BANDWIDTH, "--preference"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write here instead of stdout."),
) -> None:
    """Generate a random scenario as JSON."""
    try:
        params = GenerationParams(
            n_scalar=n_scalar,
            n_multimedia=n_multimedia,
            n_sinks_scalar=sinks if n_scalar else 0,
            n_sinks_multimedia=sinks if n_multimedia else 0,
            apps_per_kind=apps_per_kind,
            p_max_dbm=p_max_dbm,
            lifetime_days=lifetime_days,
            preference=preference,
        )
        scenario = random_scenario(seed, params)
    except (ValidationError, ConfigurationError) as exc:
        err_console.print(f"[red]invalid generation parameters[/red]: {exc}")
        raise typer.Exit(EXIT_USAGE) from exc

    text = scenario_to_json(scenario)
    if out is None:
        typer.echo(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n")
        err_console.print(f"scenario with {len(scenario.nodes)} nodes written to {out}")


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

@app.command()
def solve(
    scenario_path: Path = typer.Option(..., "--scenario", help="Scenario JSON."),
    routing: RoutingKind = typer.Option(RoutingKind.MULTIPATH, "--routing"),
    method: SolveMethod = typer.Option(SolveMethod.EXACT, "--method"),
    seed: int = typer.Option(0, "--seed", help="Heuristic seed."),
    out: Optional[Path] = typer.Option(None, "--out", help="Solution JSON; stdout if omitted."),
    time_limit: Optional[float] = typer.Option(
        None, "--time-limit", envvar=ENV_TIME_LIMIT, help="Wall-clock limit in seconds."
    ),
    node_limit: Optional[int] = typer.Option(None, "--node-limit", envvar=ENV_NODE_LIMIT),
    branching: BranchingRule = typer.Option(BranchingRule.MOST_FRACTIONAL, "--branching"),
    search: SearchOrder = typer.Option(SearchOrder.BEST_FIRST, "--search"),
    stats_path: Optional[Path] = typer.Option(None, "--stats", help="Solver stats JSON."),
    trace_path: Optional[Path] = typer.Option(None, "--trace", help="Heuristic trace (JSON lines)."),
    lp_path: Optional[Path] = typer.Option(None, "--write-lp", help="Dump the model in LP format."),
) -> None:
    """Solve one scenario exactly or with the rounding heuristic."""
    scenario = _read_scenario(scenario_path)
    try:
        config = BnbConfig.from_settings(
            load_settings(),
            time_limit_s=time_limit,
            node_limit=node_limit,
            branching=branching,
            search=search,
        )
    except ValidationError as exc:
        err_console.print(f"[red]invalid solver limits[/red]: {exc}")
        raise typer.Exit(EXIT_USAGE) from exc

    if method is SolveMethod.HEURISTIC and routing is not RoutingKind.STATIC:
        logger.warning("the heuristic routes along the DODAG; ignoring --routing %s", routing.value)

    if lp_path is not None:
        kind = RoutingKind.STATIC if method is SolveMethod.HEURISTIC else routing
        write_lp(build_model(scenario, routing_mode(scenario, kind)), lp_path)

    try:
        if method is SolveMethod.HEURISTIC:
            started = time.monotonic()
            deadline = started + config.time_limit_s if config.time_limit_s else None
            heuristic = RoundingHeuristic(scenario, seed, deadline=deadline)
            solution = heuristic.run()
            mode = heuristic.mode
            if trace_path is not None:
                write_trace_jsonl(heuristic.state.trace, trace_path)
            stats_json = json.dumps(
                {
                    "lp_iterations": heuristic.state.lp_iterations,
                    "lp_solves": heuristic.state.lp_solves,
                    "wall_time_s": heuristic.state.wall_time_s,
                },
                indent=2,
            )
        else:
            outcome = solve_scenario(scenario, Method.EXACT, routing, seed, config)
            solution, mode = outcome.solution, outcome.mode
            stats_json = outcome.stats.to_json()
    except VsnError as exc:
        err_console.print(f"[red]solve failed[/red]: {exc}")
        raise typer.Exit(EXIT_FAILED) from exc

    if stats_path is not None:
        stats_path.parent.mkdir(parents=True, exist_ok=True)
        stats_path.write_text(stats_json + "\n")
    if out is None:
        typer.echo(solution.model_dump_json(indent=2))
    else:
        save_solution(solution, out)
    err_console.print(_summary_table(scenario, solution, f"{method.value} / {mode.name}"))

    if not solution.status.has_values:
        raise typer.Exit(EXIT_FAILED)
    violations = validate_solution(scenario, mode, solution)
    if violations:
        for v in violations:
            err_console.print(f"[red]{v.tag}[/red] residual={v.residual:.3g} {v.detail}")
        raise typer.Exit(EXIT_FAILED)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

@app.command()
def validate(
    scenario_path: Path = typer.Option(..., "--scenario", help="Scenario JSON."),
    solution_path: Path = typer.Option(..., "--solution", help="Solution JSON."),
    routing: RoutingKind = typer.Option(RoutingKind.MULTIPATH, "--routing"),
) -> None:
    """Check a solution against every constraint of its scenario."""
    scenario = _read_scenario(scenario_path)
    solution = _read_solution(solution_path)
    violations = validate_solution(scenario, routing_mode(scenario, routing), solution)
    if not violations:
        console.print(f"valid ({solution.status.value}, objective {solution.objective:.6g})")
        return
    table = Table(title=f"{len(violations)} violation(s)")
    table.add_column("Tag")
    table.add_column("Residual", justify="right")
    table.add_column("Detail")
    for v in violations:
        table.add_row(v.tag, f"{v.residual:.3g}", v.detail)
    console.print(table)
    raise typer.Exit(EXIT_FAILED)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

@app.command()
def sweep(
    spec_path: Path = typer.Option(..., "--spec", help="ExperimentSpec JSON."),
    out_dir: Path = typer.Option(Path("results"), "--out-dir"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Override the spec's pool size."),
    report: bool = typer.Option(False, "--report", help="Print the text report."),
) -> None:
    """Run an experiment sweep and write rows.csv, rows.json and timings.csv."""
    try:
        spec = load_spec(spec_path)
        if workers is not None:
            spec = spec.model_validate({**spec.model_dump(), "workers": workers})
    except (ValidationError, json.JSONDecodeError, OSError) as exc:
        raise _input_error(spec_path, exc) from exc

    rows = run_experiment(spec)
    written = write_sweep_outputs(rows, out_dir)
    if report:
        console.print(generate_text_report(rows, spec.name), markup=False, highlight=False)
    err_console.print(f"{len(rows)} rows written to {written['rows_csv'].parent}")

    bad = [r for r in rows if r.violations]
    if bad:
        err_console.print(f"[red]{len(bad)} row(s) failed validation[/red]")
        raise typer.Exit(EXIT_FAILED)
