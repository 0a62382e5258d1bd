"""Generalized cubic partitions a_c(n), p(n) and the auxiliary b(n).

The series constructors go through the eta-quotient engine.  The oracle
counts partitions directly and shares no code with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .products import EtaQuotient, eta_quotient
from .series import EXACT, CoefficientRing, PowerSeries, SeriesError


@dataclass(frozen=True)
class PartitionFamily:
    """Partitions whose even parts come in ``colors`` colors."""

    colors: int

    def __post_init__(self):
        if self.colors < 1:
            raise SeriesError(f"color count must be >= 1, got {self.colors}")

    @property
    def quotient(self) -> EtaQuotient:
        return EtaQuotient(((1, -1), (2, -(self.colors - 1))))

    def series(self, N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
        return eta_quotient(self.quotient, N, ring)

    def count(self, n: int) -> int:
        return a_c_oracle(self.colors, n)


def a_c_series(c: int, N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    """Generating function 1/(f_1 f_2^(c-1)) of generalized cubic partitions."""
    return PartitionFamily(c).series(N, ring)


def partition_series(N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    return a_c_series(1, N, ring)


B_QUOTIENT = EtaQuotient(((1, -1), (2, 3)))


def b_series(N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    """f_2^3 / f_1."""
    return eta_quotient(B_QUOTIENT, N, ring)


@lru_cache(maxsize=64)
def a_c_table(c: int, n: int) -> tuple[int, ...]:
    """Counts a_c(0..n) by unbounded-knapsack DP over part types.

    An odd size k is one part type, an even size k is ``c`` distinct types.
    """
    if c < 1:
        raise SeriesError(f"color count must be >= 1, got {c}")
    ways = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(c if k % 2 == 0 else 1):
            for s in range(k, n + 1):
                ways[s] += ways[s - k]
    return tuple(ways)


def a_c_oracle(c: int, n: int) -> int:
    if n < 0:
        return 0
    return a_c_table(c, n)[n]
