"""Decision log of the rounding heuristic."""

from __future__ import annotations

from collections.abc import Iterable
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict


class TraceAction(str, Enum):
    FORCED_ZERO = "forced_zero"
    """Dropped because the relaxation left it entirely inactive."""

    COMMITTED = "committed"
    DISMISSED = "dismissed"
    """Dropped because committing it made the relaxation infeasible."""


class TraceRecord(BaseModel):
    """One permanent decision and the bound fixes it added."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    iteration: int
    lp_objective: float | None
    """Objective of the relaxation the decision was read from."""

    action: TraceAction
    app_id: int
    fixes: dict[str, float]
    """Variable name -> value pinned into the running relaxation."""


def write_trace_jsonl(trace: Iterable[TraceRecord], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for record in trace:
            fh.write(record.model_dump_json() + "\n")
    return path


def read_trace_jsonl(path: str | Path) -> list[TraceRecord]:
    lines = Path(path).read_text().splitlines()
    return [TraceRecord.model_validate_json(line) for line in lines if line.strip()]
