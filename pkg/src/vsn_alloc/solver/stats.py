"""Solver configuration and run statistics."""

from __future__ import annotations

from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from vsn_alloc.config import Settings
from vsn_alloc.model.solution import SolutionStatus


class BranchingRule(str, Enum):
    MOST_FRACTIONAL = "most_fractional"
    PSEUDO_COST = "pseudo_cost"


class SearchOrder(str, Enum):
    BEST_FIRST = "best_first"
    DEPTH_FIRST = "depth_first"


class BnbConfig(BaseModel):
    """Tolerances, limits and policies of the branch-and-bound search."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    integrality_tol: float = Field(default=1e-6, gt=0)
    gap_tol: float = Field(default=1e-6, gt=0)
    """Relative gap at which a node is pruned, against ``max(1, |incumbent|)``."""

    node_limit: int = Field(default=100_000, ge=1)
    time_limit_s: float | None = Field(default=None, gt=0)
    branching: BranchingRule = BranchingRule.MOST_FRACTIONAL
    search: SearchOrder = SearchOrder.BEST_FIRST

    @classmethod
    def from_settings(cls, settings: Settings, **overrides: Any) -> BnbConfig:
        """Limits from the environment-backed settings, then *overrides*."""
        data: dict[str, Any] = {
            "node_limit": settings.node_limit,
            "time_limit_s": settings.time_limit_s,
        }
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.model_validate(data)


class SolverStats(BaseModel):
    """Run summary, serialised as the solver's JSON stats fragment."""

    lp_iterations: int = 0
    bnb_nodes: int = 0
    incumbent: float | None = None
    bound: float | None = None
    gap: float | None = None
    wall_time_s: float = 0.0
    status: SolutionStatus = SolutionStatus.NO_INCUMBENT

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


def relative_gap(incumbent: float | None, bound: float | None) -> float | None:
    """``(bound - incumbent) / max(1, |incumbent|)``, floored at zero."""
    if incumbent is None or bound is None:
        return None
    return max(0.0, bound - incumbent) / max(1.0, abs(incumbent))
