"""Solution records exchanged between solvers, validators and the CLI."""

from __future__ import annotations

import re
from enum import Enum
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from vsn_alloc.errors import DomainError

from .milp import MilpModel, VarKind

_NAME_RE = re.compile(r"^([zxyhfg])\[(\d+(?:,\d+)*)\]$")


def parse_variable_name(name: str) -> tuple[VarKind, tuple[int, ...]]:
    """Split ``"y[4,1,0]"`` into ``(VarKind.Y, (4, 1, 0))``."""
    match = _NAME_RE.match(name)
    if match is None:
        raise DomainError(f"malformed variable name {name!r}")
    return VarKind(match.group(1)), tuple(int(p) for p in match.group(2).split(","))


class SolutionStatus(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    """A valid assignment whose optimality is not proven."""

    INFEASIBLE = "infeasible"
    """Proven: no assignment satisfies the model."""

    NO_INCUMBENT = "no_incumbent"
    """Limits ran out before any feasible assignment was found."""

    @property
    def has_values(self) -> bool:
        return self in (SolutionStatus.OPTIMAL, SolutionStatus.FEASIBLE)


class Solution(BaseModel):
    """Variable values keyed by symbolic name, plus objective and status."""

    model_config = ConfigDict(extra="forbid")

    values: dict[str, float] = Field(default_factory=dict)
    objective: float = 0.0
    status: SolutionStatus

    def value(self, name: str, default: float = 0.0) -> float:
        return self.values.get(name, default)

    def active(self, name: str) -> bool:
        return self.values.get(name, 0.0) >= 0.5

    def to_array(self, model: MilpModel) -> np.ndarray:
        return np.array([self.values.get(v.name, 0.0) for v in model.variables])

    @classmethod
    def from_array(
        cls,
        model: MilpModel,
        x: np.ndarray,
        status: SolutionStatus,
    ) -> Solution:
        return cls(
            values=model.values_by_name(x),
            objective=model.objective_value(x),
            status=status,
        )

    @classmethod
    def infeasible(cls, status: SolutionStatus = SolutionStatus.INFEASIBLE) -> Solution:
        return cls(status=status)


def save_solution(solution: Solution, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(solution.model_dump_json(indent=2) + "\n")
    return path


def load_solution(path: str | Path) -> Solution:
    return Solution.model_validate_json(Path(path).read_text())
