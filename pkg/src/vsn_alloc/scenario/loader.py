"""Scenario JSON persistence.

Files are plain ``model_dump_json`` output; loading goes through pydantic so
unknown keys and out-of-range values raise ``pydantic.ValidationError``.
"""

from __future__ import annotations

import logging
from pathlib import Path

from .models import Scenario

logger = logging.getLogger(__name__)


def scenario_to_json(scenario: Scenario) -> str:
    return scenario.model_dump_json(indent=2)


def scenario_from_json(text: str) -> Scenario:
    return Scenario.model_validate_json(text)


def save_scenario(scenario: Scenario, path: str | Path) -> Path:
    """Write *scenario* to *path*, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(scenario_to_json(scenario) + "\n")
    logger.info("saved scenario (%d nodes) to %s", len(scenario.nodes), path)
    return path


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario file."""
    path = Path(path)
    scenario = scenario_from_json(path.read_text())
    logger.info(
        "loaded scenario from %s: %d nodes, %d applications",
        path, len(scenario.nodes), len(scenario.applications),
    )
    return scenario
