"""Pydantic models for experiment specifications and their results.

An :class:`ExperimentSpec` is loaded from JSON, expanded into
(sweep value, replication) points, and every solved point becomes one
:class:`MetricsRow` per method.  :class:`GapSummary` pairs exact and
heuristic rows.
"""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from vsn_alloc.model.milp import RoutingKind
from vsn_alloc.scenario.generator import GenerationParams


class Method(str, Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"
    BOTH = "both"

    def expand(self) -> list[Method]:
        if self is Method.BOTH:
            return [Method.EXACT, Method.HEURISTIC]
        return [self]


class SweepAxis(str, Enum):
    OFFERED_APPS_PER_KIND = "offered_apps_per_kind"
    NODE_MIX = "node_mix"
    """Value is the number of multimedia nodes; the total stays fixed."""

    N_SINKS = "n_sinks"
    """Value is the number of sinks of each node type."""

    LIFETIME_DAYS = "lifetime_days"
    P_MAX_DBM = "p_max_dbm"
    ROUTING_MODE = "routing_mode"


SweepValue = float | str


class ExperimentSpec(BaseModel):
    """One sweep: a base configuration, an axis and the values it takes."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    base: GenerationParams = Field(default_factory=GenerationParams)
    sweep: SweepAxis
    sweep_values: list[SweepValue] = Field(min_length=1)
    method: Method = Method.EXACT
    routing: RoutingKind = RoutingKind.MULTIPATH
    """Routing of the exact method unless the sweep axis is the routing mode."""

    replications: int = Field(default=20, ge=1)
    base_seed: int = 0
    time_limit_s: float | None = Field(default=None, gt=0)
    """Per-solve limit; falls back to the environment default."""

    node_limit: int | None = Field(default=None, ge=1)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_values(self) -> ExperimentSpec:
        for value in self.sweep_values:
            if self.sweep is SweepAxis.ROUTING_MODE:
                RoutingKind(value)
            elif isinstance(value, str):
                raise ValueError(f"sweep {self.sweep.value} needs numeric values, got {value!r}")
            elif self.sweep in (
                SweepAxis.OFFERED_APPS_PER_KIND,
                SweepAxis.NODE_MIX,
                SweepAxis.N_SINKS,
            ) and (value != int(value) or value < 0):
                raise ValueError(f"sweep {self.sweep.value} needs non-negative integers, got {value}")
        return self

    def seeds(self) -> list[int]:
        return [self.base_seed + rep for rep in range(self.replications)]


class MetricsRow(BaseModel):
    """Outcome of one method on one generated scenario."""

    model_config = ConfigDict(extra="forbid")

    sweep_value: SweepValue
    seed: int
    method: Method
    routing: RoutingKind
    status: str
    """A solution status, or ``"error"`` when the solve raised."""

    objective: float = 0.0
    active_temperature: int = 0
    active_light: int = 0
    active_cta: int = 0
    active_atc: int = 0
    active_scalar_nodes: int = 0
    active_multimedia_nodes: int = 0
    lp_iterations: int = 0
    bnb_nodes: int = 0
    bound: float | None = None
    gap: float | None = None
    violations: int = 0
    wall_time_s: float = 0.0

    @property
    def active_scalar_apps(self) -> int:
        return self.active_temperature + self.active_light

    @property
    def active_visual_apps(self) -> int:
        return self.active_cta + self.active_atc


# Columns of rows.csv; wall time is kept out so reruns are byte-identical.
ROW_COLUMNS = [
    "sweep_value",
    "seed",
    "method",
    "routing",
    "status",
    "objective",
    "active_temperature",
    "active_light",
    "active_cta",
    "active_atc",
    "active_scalar_nodes",
    "active_multimedia_nodes",
    "lp_iterations",
    "bnb_nodes",
    "bound",
    "gap",
    "violations",
]


class GapPoint(BaseModel):
    sweep_value: SweepValue
    seed: int
    exact: float
    heuristic: float
    gap: float
    """(exact - heuristic) / exact, 0 when the exact optimum is 0."""

    time_ratio: float | None
    """Heuristic wall time over exact wall time."""


class GapSummary(BaseModel):
    points: list[GapPoint] = Field(default_factory=list)
    mean_gap: float | None = None
    min_gap: float | None = None
    max_gap: float | None = None
    mean_time_ratio: float | None = None
    heuristic_faster_fraction: float | None = None
    missing: list[tuple[str, int]] = Field(default_factory=list)
    """(sweep value, seed) pairs lacking a usable row for one of the methods."""
