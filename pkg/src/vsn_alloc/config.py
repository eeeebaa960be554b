"""Runtime settings read from the environment.

Only a handful of knobs are environment-driven; everything else is a CLI
flag or an ExperimentSpec field.
"""

from __future__ import annotations

import os

from pydantic import BaseModel, Field

ENV_TIME_LIMIT = "VSN_TIME_LIMIT_S"
ENV_NODE_LIMIT = "VSN_NODE_LIMIT"
ENV_LOG_LEVEL = "VSN_LOG_LEVEL"


class Settings(BaseModel):
    """Process-wide defaults."""

    time_limit_s: float = Field(default=60.0, gt=0)
    """Default branch-and-bound wall-clock limit."""

    node_limit: int = Field(default=100_000, ge=1)
    """Default branch-and-bound node limit."""

    log_level: str = "WARNING"


def load_settings(environ: dict[str, str] | None = None) -> Settings:
    """Build Settings from *environ* (defaults to ``os.environ``)."""
    env = os.environ if environ is None else environ
    raw: dict[str, str] = {}
    if env.get(ENV_TIME_LIMIT):
        raw["time_limit_s"] = env[ENV_TIME_LIMIT]
    if env.get(ENV_NODE_LIMIT):
        raw["node_limit"] = env[ENV_NODE_LIMIT]
    if env.get(ENV_LOG_LEVEL):
        raw["log_level"] = env[ENV_LOG_LEVEL].upper()
    return Settings.model_validate(raw)
