"""LP-rounding heuristic for static-routing deployments."""

from .rounding import (
    HeuristicState,
    RoundingHeuristic,
    finalize,
    heuristic_trace,
    replay_trace,
    run_heuristic,
)
from .trace import TraceAction, TraceRecord, read_trace_jsonl, write_trace_jsonl

__all__ = [
    "HeuristicState",
    "RoundingHeuristic",
    "TraceAction",
    "TraceRecord",
    "finalize",
    "heuristic_trace",
    "read_trace_jsonl",
    "replay_trace",
    "run_heuristic",
    "write_trace_jsonl",
]
