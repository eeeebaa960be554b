"""The allocation MILP: building, relaxing, fixing, validating, summarising."""

from .builder import build_model
from .lp_format import write_lp
from .metrics import DeploymentMetrics, deployment_metrics
from .milp import (
    LinearConstraint,
    LpArrays,
    MilpModel,
    ModelIndex,
    RoutingKind,
    RoutingMode,
    Sense,
    VariableHandle,
    VarKind,
    fix_variable,
    fix_variables,
    relax,
)
from .solution import (
    Solution,
    SolutionStatus,
    load_solution,
    parse_variable_name,
    save_solution,
)
from .validate import Violation, validate_solution

__all__ = [
    "DeploymentMetrics",
    "LinearConstraint",
    "LpArrays",
    "MilpModel",
    "ModelIndex",
    "RoutingKind",
    "RoutingMode",
    "Sense",
    "Solution",
    "SolutionStatus",
    "VarKind",
    "VariableHandle",
    "Violation",
    "build_model",
    "deployment_metrics",
    "fix_variable",
    "fix_variables",
    "load_solution",
    "parse_variable_name",
    "relax",
    "save_solution",
    "validate_solution",
    "write_lp",
]
