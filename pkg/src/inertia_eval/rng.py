"""splitmix64, the single source of randomness for every seeded operation."""

from __future__ import annotations

import numpy as np

from . import _kernels

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64_mix(z: int) -> int:
    """The splitmix64 output function applied to ``z`` (no state increment)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Prng:
    """splitmix64 generator.

    ``random()`` keeps the top 53 bits of the output, i.e. ``output / 2**64``
    truncated to double precision, so the result is always in [0, 1).
    ``below(k)`` returns ``floor(output * k / 2**64)``.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return splitmix64_mix(self.state)

    def random(self) -> float:
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def below(self, k: int) -> int:
        if k <= 0:
            raise ValueError("bound must be positive")
        return (self.next() * k) >> 64

    def below_array(self, k: int, size: int) -> np.ndarray:
        """``size`` consecutive ``below(k)`` draws, computed in bulk."""
        out = np.empty(size, dtype=np.int64)
        if size:
            self.state = _kernels.splitmix64_below_fill(self.state, k, out)
        return out

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def sample_indices(self, population: int, k: int) -> list[int]:
        """``k`` distinct indices from ``range(population)`` (partial Fisher-Yates), sorted."""
        if not 0 <= k <= population:
            raise ValueError("sample size out of range")
        pool = list(range(population))
        for i in range(k):
            j = i + self.below(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])
