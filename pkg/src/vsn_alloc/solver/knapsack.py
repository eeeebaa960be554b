"""Exact 0/1 multiple-knapsack by memoised recursion over remaining capacities."""

from __future__ import annotations

from collections.abc import Sequence
from functools import lru_cache

from vsn_alloc.errors import DomainError


def multi_knapsack_dp(
    values: Sequence[float],
    weights: Sequence[float],
    capacities: Sequence[float],
) -> float:
    """Best total value packing each item into at most one bin.

    Bins are interchangeable apart from their remaining capacity, so the
    state is the sorted tuple of remaining capacities.

    Raises
    ------
    DomainError
        On mismatched lengths or negative weights or capacities.
    """
    if len(values) != len(weights):
        raise DomainError("values and weights must have the same length")
    if any(w < 0 for w in weights) or any(c < 0 for c in capacities):
        raise DomainError("weights and capacities must be non-negative")

    items = list(zip(values, weights))

    @lru_cache(maxsize=None)
    def best(item: int, remaining: tuple[float, ...]) -> float:
        if item == len(items):
            return 0.0
        value, weight = items[item]
        result = best(item + 1, remaining)
        if value <= 0:
            return result
        tried: set[float] = set()
        for b, cap in enumerate(remaining):
            if cap < weight or cap in tried:
                continue
            tried.add(cap)
            left = tuple(sorted(remaining[:b] + (cap - weight,) + remaining[b + 1 :]))
            result = max(result, value + best(item + 1, left))
        return result

    return best(0, tuple(sorted(float(c) for c in capacities)))
