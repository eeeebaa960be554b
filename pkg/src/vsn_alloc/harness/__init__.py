"""Experiment sweeps, method comparison and sweep reporting."""

from .compare import compare_methods, relative_objective_gap
from .io import (
    load_spec,
    read_rows_json,
    write_rows_csv,
    write_rows_json,
    write_sweep_outputs,
    write_timings_csv,
)
from .models import (
    ROW_COLUMNS,
    ExperimentSpec,
    GapPoint,
    GapSummary,
    Method,
    MetricsRow,
    SweepAxis,
)
from .report import generate_text_report
from .runner import (
    apply_sweep,
    bnb_config,
    routing_mode,
    run_experiment,
    run_point,
    run_virtualization,
    solve_scenario,
)

__all__ = [
    "ROW_COLUMNS",
    "ExperimentSpec",
    "GapPoint",
    "GapSummary",
    "Method",
    "MetricsRow",
    "SweepAxis",
    "apply_sweep",
    "bnb_config",
    "compare_methods",
    "generate_text_report",
    "load_spec",
    "read_rows_json",
    "relative_objective_gap",
    "routing_mode",
    "run_experiment",
    "run_point",
    "run_virtualization",
    "solve_scenario",
    "write_rows_csv",
    "write_rows_json",
    "write_sweep_outputs",
    "write_timings_csv",
]
