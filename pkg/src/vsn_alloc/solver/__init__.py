"""LP and MILP solving: simplex, branch and bound, and exact oracles."""

from .bnb import BranchAndBound, MilpResult, PseudoCosts, solve_milp
from .enumerate import ENUMERATION_BUDGET, assignment_space, enumerate_exact
from .knapsack import multi_knapsack_dp
from .simplex import (
    DEFAULT_TOLERANCES,
    LpResult,
    LpStatus,
    LpTolerances,
    geometric_scaling,
    solve_arrays,
    solve_lp,
)
from .stats import BnbConfig, BranchingRule, SearchOrder, SolverStats, relative_gap

__all__ = [
    "DEFAULT_TOLERANCES",
    "ENUMERATION_BUDGET",
    "BnbConfig",
    "BranchAndBound",
    "BranchingRule",
    "LpResult",
    "LpStatus",
    "LpTolerances",
    "MilpResult",
    "PseudoCosts",
    "SearchOrder",
    "SolverStats",
    "assignment_space",
    "enumerate_exact",
    "geometric_scaling",
    "multi_knapsack_dp",
    "relative_gap",
    "solve_arrays",
    "solve_lp",
    "solve_milp",
]
