"""Reading experiment specs and writing sweep tables."""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

from .models import ROW_COLUMNS, ExperimentSpec, MetricsRow

logger = logging.getLogger(__name__)


def load_spec(path: str | Path) -> ExperimentSpec:
    return ExperimentSpec.model_validate_json(Path(path).read_text())


def _cell(value: object) -> str:
    if value is None:
        return ""
    if hasattr(value, "value"):
        return str(value.value)
    return repr(value) if isinstance(value, float) else str(value)


def write_rows_csv(rows: list[MetricsRow], path: str | Path) -> Path:
    """Rows in the fixed :data:`ROW_COLUMNS` order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ROW_COLUMNS)
        for row in rows:
            writer.writerow([_cell(getattr(row, col)) for col in ROW_COLUMNS])
    return path


def write_rows_json(rows: list[MetricsRow], path: str | Path) -> Path:
    """One object per row, same fields as the CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [row.model_dump(mode="json", include=set(ROW_COLUMNS)) for row in rows]
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def write_timings_csv(rows: list[MetricsRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sweep_value", "seed", "method", "wall_time_s"])
        for row in rows:
            writer.writerow([_cell(row.sweep_value), row.seed, row.method.value, f"{row.wall_time_s:.6f}"])
    return path


def read_rows_json(path: str | Path) -> list[MetricsRow]:
    return [MetricsRow.model_validate(item) for item in json.loads(Path(path).read_text())]


def write_sweep_outputs(rows: list[MetricsRow], out_dir: str | Path) -> dict[str, Path]:
    """``rows.csv``, ``rows.json`` and ``timings.csv`` under *out_dir*."""
    out = Path(out_dir)
    written = {
        "rows_csv": write_rows_csv(rows, out / "rows.csv"),
        "rows_json": write_rows_json(rows, out / "rows.json"),
        "timings_csv": write_timings_csv(rows, out / "timings.csv"),
    }
    logger.info("wrote %d rows to %s", len(rows), out)
    return written
