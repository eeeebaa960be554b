"""In-memory MILP representation.

The model is a maximisation over bounded variables with linear rows.  Binary
variables carry bounds ``[0, 1]`` plus an ``integral`` flag, so relaxing a
model is a flag flip and fixing a variable is a bound change.  Variables are
named symbolically (``z[3]``, ``y[4,1,0]``, ``f[2,7]``) and the
:class:`ModelIndex` maps names and ``(kind, key)`` pairs to positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from vsn_alloc.errors import DomainError, ScenarioLookupError
from vsn_alloc.scenario.routing import DodagRouting


class VarKind(str, Enum):
    """Variable families of the allocation model."""

    Z = "z"  # application deployed
    X = "x"  # node active
    Y = "y"  # node senses a test point of an application
    H = "h"  # test point covered
    F = "f"  # flow on a link, bits/second
    G = "g"  # link selected as the single next hop


class Sense(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class RoutingKind(str, Enum):
    MULTIPATH = "multipath"
    SINGLEPATH = "singlepath"
    STATIC = "static"


@dataclass(frozen=True)
class RoutingMode:
    """Routing strategy; ``STATIC`` carries the tree that flows must follow."""

    kind: RoutingKind
    dodag: DodagRouting | None = None

    def __post_init__(self) -> None:
        if (self.kind is RoutingKind.STATIC) != (self.dodag is not None):
            raise DomainError("a DODAG is required for static routing and only there")

    @classmethod
    def multipath(cls) -> RoutingMode:
        return cls(RoutingKind.MULTIPATH)

    @classmethod
    def singlepath(cls) -> RoutingMode:
        return cls(RoutingKind.SINGLEPATH)

    @classmethod
    def static(cls, dodag: DodagRouting) -> RoutingMode:
        return cls(RoutingKind.STATIC, dodag)

    @property
    def name(self) -> str:
        return self.kind.value


def variable_name(kind: VarKind, key: tuple[int, ...]) -> str:
    return f"{kind.value}[{','.join(str(k) for k in key)}]"


@dataclass(frozen=True)
class VariableHandle:
    index: int
    kind: VarKind
    key: tuple[int, ...]
    lower: float = 0.0
    upper: float = 1.0
    integral: bool = True

    @property
    def name(self) -> str:
        return variable_name(self.kind, self.key)

    @property
    def is_fixed(self) -> bool:
        return self.lower == self.upper


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coef * var) <sense> rhs`` with terms given as (variable index, coef)."""

    terms: tuple[tuple[int, float], ...]
    sense: Sense
    rhs: float
    tag: str

    def activity(self, values: np.ndarray) -> float:
        return float(sum(coef * values[idx] for idx, coef in self.terms))


@dataclass
class ModelIndex:
    """Bidirectional map between symbolic variables and column positions."""

    by_key: dict[tuple[VarKind, tuple[int, ...]], int] = field(default_factory=dict)
    by_name: dict[str, int] = field(default_factory=dict)

    def add(self, handle: VariableHandle) -> None:
        self.by_key[(handle.kind, handle.key)] = handle.index
        self.by_name[handle.name] = handle.index

    def find(self, kind: VarKind, *key: int) -> int | None:
        return self.by_key.get((kind, tuple(key)))

    def position(self, kind: VarKind, *key: int) -> int:
        pos = self.find(kind, *key)
        if pos is None:
            raise ScenarioLookupError(f"model has no variable {variable_name(kind, key)}")
        return pos


@dataclass
class LpArrays:
    """Dense arrays of a model, in the layout the simplex consumes.

    ``sense`` holds -1 for <=, 0 for = and +1 for >=.
    """

    c: np.ndarray
    a: np.ndarray
    sense: np.ndarray
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    integral: np.ndarray


_SENSE_CODE = {Sense.LE: -1, Sense.EQ: 0, Sense.GE: 1}


class _RowCache:
    """Dense constraint matrix shared by every copy derived from one build."""

    def __init__(self) -> None:
        self.arrays: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None = None


@dataclass
class MilpModel:
    """Maximise ``objective`` subject to ``constraints`` and variable bounds."""

    variables: list[VariableHandle]
    constraints: tuple[LinearConstraint, ...]
    objective: tuple[tuple[int, float], ...]
    index: ModelIndex
    mode: RoutingMode
    _rows: _RowCache = field(default_factory=_RowCache, repr=False, compare=False)

    # -- lookups -----------------------------------------------------------

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def is_integral(self) -> bool:
        return any(v.integral for v in self.variables)

    def handle(self, kind: VarKind, *key: int) -> VariableHandle:
        return self.variables[self.index.position(kind, *key)]

    def find(self, kind: VarKind, *key: int) -> VariableHandle | None:
        pos = self.index.find(kind, *key)
        return None if pos is None else self.variables[pos]

    def by_name(self, name: str) -> VariableHandle:
        try:
            return self.variables[self.index.by_name[name]]
        except KeyError:
            raise ScenarioLookupError(f"model has no variable {name}") from None

    def of_kind(self, kind: VarKind) -> list[VariableHandle]:
        return [v for v in self.variables if v.kind is kind]

    def objective_value(self, values: np.ndarray) -> float:
        return float(sum(coef * values[idx] for idx, coef in self.objective))

    # -- array views -------------------------------------------------------

    def to_arrays(self) -> LpArrays:
        if self._rows.arrays is None:
            m, n = len(self.constraints), self.n_vars
            a = np.zeros((m, n))
            sense = np.zeros(m, dtype=int)
            b = np.zeros(m)
            for r, con in enumerate(self.constraints):
                for idx, coef in con.terms:
                    a[r, idx] += coef
                sense[r] = _SENSE_CODE[con.sense]
                b[r] = con.rhs
            c = np.zeros(n)
            for idx, coef in self.objective:
                c[idx] += coef
            self._rows.arrays = (c, a, sense, b)
        c, a, sense, b = self._rows.arrays
        return LpArrays(
            c=c,
            a=a,
            sense=sense,
            b=b,
            lower=np.array([v.lower for v in self.variables], dtype=float),
            upper=np.array([v.upper for v in self.variables], dtype=float),
            integral=np.array([v.integral for v in self.variables], dtype=bool),
        )

    def values_by_name(self, x: np.ndarray) -> dict[str, float]:
        return {v.name: float(x[v.index]) for v in self.variables}

    def with_variables(self, variables: list[VariableHandle]) -> MilpModel:
        return replace(self, variables=variables)


# ---------------------------------------------------------------------------
# Model transformations
# ---------------------------------------------------------------------------

def relax(model: MilpModel) -> MilpModel:
    """Same model with every integrality flag cleared; bounds are kept."""
    return model.with_variables(
        [replace(v, integral=False) if v.integral else v for v in model.variables]
    )


def fix_variable(model: MilpModel, handle: VariableHandle | int, value: float) -> MilpModel:
    """Copy of *model* with the variable's bounds collapsed onto *value*.

    Raises
    ------
    DomainError
        If *value* lies outside the variable's current bounds.
    """
    pos = handle if isinstance(handle, int) else handle.index
    var = model.variables[pos]
    if not var.lower - 1e-12 <= value <= var.upper + 1e-12:
        raise DomainError(
            f"cannot fix {var.name} to {value}: bounds are [{var.lower}, {var.upper}]"
        )
    variables = list(model.variables)
    variables[pos] = replace(var, lower=float(value), upper=float(value))
    return model.with_variables(variables)


def fix_variables(model: MilpModel, fixes: dict[int, float]) -> MilpModel:
    """Apply several fixes at once (same checks as :func:`fix_variable`)."""
    for pos, value in fixes.items():
        model = fix_variable(model, pos, value)
    return model
