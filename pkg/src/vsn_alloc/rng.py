"""Named, reproducible random streams.

Scenario generation and the rounding heuristic never share a stream: each
consumer asks for ``SeededRNG(seed).fork("<purpose>")``, so adding a draw
for sink selection cannot move a single node or test point.
"""

from __future__ import annotations

import hashlib
import random
from typing import Sequence, TypeVar

T = TypeVar("T")


def derive_seed(seed: int, name: str) -> int:
    """64-bit child seed of (*seed*, *name*), stable across processes."""
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class SeededRNG:
    """Mersenne Twister stream with forking by name."""

    def __init__(self, seed: int) -> None:
        self.seed = seed
        self._stream = random.Random(seed)

    def fork(self, name: str) -> SeededRNG:
        """Independent child stream; depends only on the seed and *name*."""
        return SeededRNG(derive_seed(self.seed, name))

    def uniform(self, low: float, high: float) -> float:
        return self._stream.uniform(low, high)

    def random_int(self, low: int, high: int) -> int:
        """Integer in the closed range [low, high]."""
        return self._stream.randint(low, high)

    def random_choice(self, seq: Sequence[T]) -> T:
        return self._stream.choice(seq)

    def permutation(self, seq: Sequence[T]) -> list[T]:
        """Shuffled copy of *seq*."""
        items = list(seq)
        self._stream.shuffle(items)
        return items

    def __repr__(self) -> str:
        return f"SeededRNG(seed={self.seed})"
