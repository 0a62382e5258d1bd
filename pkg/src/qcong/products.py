"""Euler products, eta quotients and theta-type lattice sums."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .series import EXACT, CoefficientRing, PowerSeries, SeriesError, dilate, power


@lru_cache(maxsize=256)
def euler_f(m: int, N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    """``prod_{n>=1} (1 - q^(m n))`` through q^N.

    Built from the pentagonal number theorem
    ``f_1 = sum_k (-1)^k q^(k(3k-1)/2)`` and then dilated by ``m``.
    """
    if m < 1:
        raise SeriesError(f"Euler product scale must be >= 1, got {m}")
    if N < 0:
        raise SeriesError("truncation order must be >= 0")
    top = N // m
    c = [0] * (top + 1)
    c[0] = 1
    k = 1
    while k * (3 * k - 1) // 2 <= top:
        sign = -1 if k % 2 else 1
        c[k * (3 * k - 1) // 2] = sign
        g = k * (3 * k + 1) // 2
        if g <= top:
            c[g] = sign
        k += 1
    return dilate(PowerSeries(ring, c), m, N)


@dataclass(frozen=True)
class EtaQuotient:
    """A formal product ``prod f_m^e`` with canonical (sorted, merged) factors."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        for m, e in self.factors:
            if not isinstance(m, int) or m < 1:
                raise SeriesError(f"scale must be a positive integer, got {m!r}")
            merged[m] = merged.get(m, 0) + e
        canon = tuple((m, e) for m, e in sorted(merged.items()) if e)
        object.__setattr__(self, "factors", canon)

    @classmethod
    def of(cls, factors: Mapping[int, int] | Iterable[tuple[int, int]]) -> EtaQuotient:
        if isinstance(factors, Mapping):
            factors = factors.items()
        return cls(tuple(factors))

    def __mul__(self, other: EtaQuotient) -> EtaQuotient:
        return EtaQuotient(self.factors + other.factors)

    def __truediv__(self, other: EtaQuotient) -> EtaQuotient:
        return EtaQuotient(self.factors + tuple((m, -e) for m, e in other.factors))

    def __pow__(self, k: int) -> EtaQuotient:
        return EtaQuotient(tuple((m, e * k) for m, e in self.factors))

    def __str__(self):
        if not self.factors:
            return "1"
        return " * ".join(f"f{m}" if e == 1 else f"f{m}^{e}" for m, e in self.factors)

    @classmethod
    def parse(cls, text: str) -> EtaQuotient:
        return parse_eta_quotient(text)


class EtaParseError(SeriesError):
    def __init__(self, message: str, token: str):
        super().__init__(message)
        self.token = token


_FACTOR = re.compile(r"f(\d+)(?:\^([+-]?\d+))?")


def parse_eta_quotient(text: str) -> EtaQuotient:
    """Parse ``"f1^-1 * f2^-4"``; whitespace is ignored, ``"1"`` is the empty product."""
    compact = re.sub(r"\s+", "", text)
    if compact in ("", "1"):
        return EtaQuotient()
    factors = []
    for token in compact.split("*"):
        mt = _FACTOR.fullmatch(token)
        if mt is None:
            raise EtaParseError(f"cannot parse factor {token!r} (expected f<m> or f<m>^<e>)", token)
        m = int(mt.group(1))
        e = int(mt.group(2)) if mt.group(2) is not None else 1
        if m < 1:
            raise EtaParseError(f"scale in {token!r} must be positive", token)
        if e == 0:
            raise EtaParseError(f"exponent in {token!r} must be nonzero", token)
        factors.append((m, e))
    return EtaQuotient(tuple(factors))


@lru_cache(maxsize=128)
def eta_quotient(spec: EtaQuotient, N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    result = PowerSeries.one(ring, N)
    for m, e in spec.factors:
        result = result * power(euler_f(m, N, ring), e)
    return result


ALL_INTEGERS = "all"
NONNEGATIVE = "nonneg"


@dataclass(frozen=True)
class ThetaSum:
    """``sum_j sign(j) (a j + b)^e q^(alpha j^2 + beta j)`` over the index domain."""

    a: int
    b: int
    e: int
    alpha: Fraction
    beta: Fraction
    domain: str = ALL_INTEGERS
    alternating: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.alpha <= 0:
            raise SeriesError("quadratic coefficient must be positive")
        if self.e < 0:
            raise SeriesError("weight power must be >= 0")
        if self.domain not in (ALL_INTEGERS, NONNEGATIVE):
            raise SeriesError(f"unknown index domain {self.domain!r}")

    def exponent(self, j: int) -> int:
        q = self.alpha * j * j + self.beta * j
        if q.denominator != 1 or q < 0:
            raise SeriesError(f"exponent {q} at index {j} is not a nonnegative integer")
        return int(q)

    def weight(self, j: int) -> int:
        w = (self.a * j + self.b) ** self.e
        return -w if self.alternating and j % 2 else w

    def indices(self, N: int):
        """Every index whose exponent is at most N.

        Each direction stops at the first index past the vertex of the
        quadratic whose exponent exceeds N; beyond it the exponent only grows.
        """
        vertex = -self.beta / (2 * self.alpha)
        j = 0
        while True:
            if self.exponent(j) > N and j >= vertex:
                break
            yield j
            j += 1
        if self.domain == NONNEGATIVE:
            return
        j = -1
        while True:
            if self.exponent(j) > N and j <= vertex:
                break
            yield j
            j -= 1


def theta_sum(spec: ThetaSum, N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    c = [0] * (N + 1)
    for j in spec.indices(N):
        g = spec.exponent(j)
        if g <= N:
            c[g] += spec.weight(j)
    return PowerSeries(ring, c)


JACOBI = ThetaSum(a=2, b=1, e=1, alpha=Fraction(1, 2), beta=Fraction(1, 2), domain=NONNEGATIVE, alternating=True)


def chu_a(e: int) -> ThetaSum:
    """``sum_j (3j+1)^e q^(j(3j+2))``."""
    return ThetaSum(a=3, b=1, e=e, alpha=3, beta=2)


def chu_b(e: int) -> ThetaSum:
    """``sum_k (6k+1)^e q^(k(3k+1))``."""
    return ThetaSum(a=6, b=1, e=e, alpha=3, beta=1)


def jacobi_cube(N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    """f_1^3 as ``sum_{j>=0} (-1)^j (2j+1) q^(j(j+1)/2)``."""
    return theta_sum(JACOBI, N, ring)


def f2_6_lattice(N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    """f_2^6 as the double sum over j, k >= 0 of
    ``(-1)^(j+k) (2j+1)(2k+1) q^(j(j+1)+k(k+1))``."""
    c = [0] * (N + 1)
    for j, k, g in f2_6_terms(N):
        c[g] += (-1) ** (j + k) * (2 * j + 1) * (2 * k + 1)
    return PowerSeries(ring, c)


def f2_6_terms(N: int):
    """Lattice points ``(j, k, exponent)`` of the f_2^6 double sum."""
    j = 0
    while j * (j + 1) <= N:
        k = 0
        while j * (j + 1) + k * (k + 1) <= N:
            yield j, k, j * (j + 1) + k * (k + 1)
            k += 1
        j += 1


def chu_f10_rhs(N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    """``4 A_3 B_1 - A_1 B_3``, which equals 3 f_1^10."""
    A1, A3 = theta_sum(chu_a(1), N, ring), theta_sum(chu_a(3), N, ring)
    B1, B3 = theta_sum(chu_b(1), N, ring), theta_sum(chu_b(3), N, ring)
    return 4 * (A3 * B1) - A1 * B3


def divide_by_3(s: PowerSeries) -> PowerSeries:
    m = s.ring.modulus
    if m is None:
        bad = [n for n, c in enumerate(s.coeffs) if c % 3]
        if bad:
            raise SeriesError(f"coefficient at q^{bad[0]} is not divisible by 3")
        return PowerSeries(s.ring, (c // 3 for c in s.coeffs))
    if math.gcd(m, 3) != 1:
        raise SeriesError(f"3 is not invertible modulo {m}")
    return s.scale(pow(3, -1, m))


def chu_f10(N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    return divide_by_3(chu_f10_rhs(N, ring))


def chu_f2_10_terms(N: int):
    """Lattice points ``(j, k, weight, exponent)`` of the double sum for 3 f_2^10."""
    A = chu_a(1)
    B = chu_b(1)
    for j in A.indices(N // 2):
        gj = 2 * A.exponent(j)
        for k in B.indices((N - gj) // 2 if gj <= N else -1):
            g = gj + 2 * B.exponent(k)
            if g > N:
                continue
            x, y = 3 * j + 1, 6 * k + 1
            yield j, k, 4 * x**3 * y - x * y**3, g


def chu_f2_10_lattice(N: int, ring: CoefficientRing = EXACT) -> PowerSeries:
    """3 f_2^10 as the two-index sum with exponents ``2j(3j+2) + 2k(3k+1)``."""
    c = [0] * (N + 1)
    for _, _, w, g in chu_f2_10_terms(N):
        c[g] += w
    return PowerSeries(ring, c)
