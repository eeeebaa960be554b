"""Deployment summary of a solution: what got switched on, and how much traffic."""

from __future__ import annotations

import logging

from pydantic import BaseModel, Field

from vsn_alloc.errors import DomainError
from vsn_alloc.scenario.models import ApplicationKind, Scenario

from .milp import VarKind
from .solution import Solution, parse_variable_name

logger = logging.getLogger(__name__)


class DeploymentMetrics(BaseModel):
    """Counts derived from a solution (binaries read as on when >= 0.5)."""

    objective: float = 0.0
    active_apps: dict[ApplicationKind, int] = Field(
        default_factory=lambda: {k: 0 for k in ApplicationKind}
    )
    active_nodes: dict[str, int] = Field(default_factory=dict)
    """Active nodes per profile name."""

    active_scalar_nodes: int = 0
    active_multimedia_nodes: int = 0
    sink_delivery_bps: float = 0.0
    """Traffic reaching the sinks, including what sinks sense themselves."""

    @property
    def active_scalar_apps(self) -> int:
        return sum(n for k, n in self.active_apps.items() if not k.is_visual)

    @property
    def active_visual_apps(self) -> int:
        return sum(n for k, n in self.active_apps.items() if k.is_visual)


def deployment_metrics(scenario: Scenario, solution: Solution) -> DeploymentMetrics:
    """Summarise *solution*; an infeasible solution summarises as all zeros."""
    metrics = DeploymentMetrics(
        active_nodes={name: 0 for name in sorted(scenario.profiles)}
    )
    if not solution.status.has_values:
        return metrics
    metrics.objective = solution.objective

    for app in scenario.applications:
        if solution.active(f"z[{app.id}]"):
            metrics.active_apps[app.kind] += 1

    for node in scenario.nodes:
        if not solution.active(f"x[{node.id}]"):
            continue
        metrics.active_nodes[node.profile] += 1
        if scenario.profiles[node.profile].multimedia:
            metrics.active_multimedia_nodes += 1
        else:
            metrics.active_scalar_nodes += 1

    sinks = set(scenario.sink_ids)
    rates = {a.id: a.rate_bps for a in scenario.applications}
    delivered = 0.0
    for name, value in solution.values.items():
        try:
            kind, key = parse_variable_name(name)
        except DomainError:
            logger.warning("ignoring unparseable variable name %r", name)
            continue
        if kind is VarKind.F and key[1] in sinks:
            delivered += value
        elif kind is VarKind.Y and key[0] in sinks:
            delivered += rates.get(key[1], 0.0) * value
    metrics.sink_delivery_bps = delivered
    return metrics
