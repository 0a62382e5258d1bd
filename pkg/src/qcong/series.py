"""Truncated power series in q over the integers or Z/mZ.

A :class:`PowerSeries` is known through ``q**trunc`` inclusive and stores
its coefficients densely.  Binary operations truncate to the smaller of the
two orders; nothing is ever zero-extended past what is known.
"""

from __future__ import annotations

import json
from math import gcd
from dataclasses import dataclass
from typing import Iterable, Sequence


class SeriesError(ValueError):
    pass


class RingMismatch(SeriesError):
    pass


class NotInvertible(SeriesError):
    pass


class TruncationError(SeriesError, IndexError):
    pass


# Process-wide switch for the Kronecker-substitution multiply. Off by default.
_ACCELERATED = False


def set_accelerated(flag: bool) -> bool:
    """Toggle the accelerated multiply; returns the previous setting."""
    global _ACCELERATED
    old, _ACCELERATED = _ACCELERATED, bool(flag)
    return old


def accelerated() -> bool:
    return _ACCELERATED


@dataclass(frozen=True)
class CoefficientRing:
    """``modulus=None`` is the ring of integers, otherwise Z/modulus."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise SeriesError(f"modulus must be >= 2, got {self.modulus}")

    @property
    def is_exact(self) -> bool:
        return self.modulus is None

    def reduce(self, x: int) -> int:
        return x if self.modulus is None else x % self.modulus

    def is_unit(self, x: int) -> bool:
        if self.modulus is None:
            return x in (1, -1)
        return gcd(x, self.modulus) == 1

    def inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise NotInvertible(f"{x} is not a unit in {self}")
        if self.modulus is None:
            return x
        return pow(x, -1, self.modulus)

    def __str__(self):
        return "exact" if self.modulus is None else f"mod:{self.modulus}"

    @classmethod
    def parse(cls, text: str) -> CoefficientRing:
        if text == "exact":
            return EXACT
        if text.startswith("mod:"):
            return cls(int(text[4:]))
        raise SeriesError(f"unknown ring {text!r}")


EXACT = CoefficientRing()


def Modular(modulus: int) -> CoefficientRing:
    return CoefficientRing(modulus)


class PowerSeries:
    """Immutable truncated series ``sum(coeffs[n] * q**n for n <= trunc)``."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CoefficientRing, coeffs: Iterable[int]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise SeriesError("a series needs at least one coefficient")
        if ring.modulus is not None:
            m = ring.modulus
            coeffs = tuple(c % m for c in coeffs)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def _raw(cls, ring, coeffs):
        # Caller guarantees coefficients are already canonical.
        s = object.__new__(cls)
        object.__setattr__(s, "ring", ring)
        object.__setattr__(s, "coeffs", tuple(coeffs))
        return s

    def __setattr__(self, name, value):
        raise AttributeError("PowerSeries is immutable")

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, ring: CoefficientRing, trunc: int) -> PowerSeries:
        return cls._raw(ring, (0,) * (trunc + 1))

    @classmethod
    def one(cls, ring: CoefficientRing, trunc: int) -> PowerSeries:
        return cls._raw(ring, (1,) + (0,) * trunc)

    @classmethod
    def monomial(cls, ring, exponent, trunc, value=1):
        c = [0] * (trunc + 1)
        if exponent <= trunc:
            c[exponent] = value
        return cls(ring, c)

    def coeff(self, n: int) -> int:
        if not 0 <= n <= self.trunc:
            raise TruncationError(
                f"coefficient q^{n} requested but series is known only through q^{self.trunc}"
            )
        return self.coeffs[n]

    def __getitem__(self, n):
        if isinstance(n, slice):
            raise TypeError("use truncate() or dissect() instead of slicing")
        return self.coeff(n)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, n: int) -> PowerSeries:
        if n > self.trunc:
            raise TruncationError(f"cannot extend a series known through q^{self.trunc} to q^{n}")
        if n < 0:
            raise TruncationError("truncation order must be >= 0")
        return PowerSeries._raw(self.ring, self.coeffs[: n + 1])

    def _check(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")
        return min(self.trunc, other.trunc)

    def __add__(self, other):
        n = self._check(other)
        if n is NotImplemented:
            return n
        return PowerSeries(self.ring, (x + y for x, y in zip(self.coeffs[: n + 1], other.coeffs)))

    def __neg__(self):
        return PowerSeries(self.ring, (-x for x in self.coeffs))

    def __sub__(self, other):
        n = self._check(other)
        if n is NotImplemented:
            return n
        return PowerSeries(self.ring, (x - y for x, y in zip(self.coeffs[: n + 1], other.coeffs)))

    def scale(self, k: int) -> PowerSeries:
        return PowerSeries(self.ring, (k * x for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        n = self._check(other)
        if n is NotImplemented:
            return n
        a, b = self.coeffs[: n + 1], other.coeffs[: n + 1]
        if _ACCELERATED:
            out = _kronecker(a, b, n, self.ring.modulus)
        else:
            out = _schoolbook(a, b, n, self.ring.modulus)
        return PowerSeries._raw(self.ring, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        return power(self, e)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        shown = ", ".join(map(str, self.coeffs[:8]))
        more = ", ..." if self.trunc >= 8 else ""
        return f"PowerSeries({self.ring}, trunc={self.trunc}, [{shown}{more}])"

    def invert(self) -> PowerSeries:
        return invert(self)

    def dilate(self, m: int, trunc: int | None = None) -> PowerSeries:
        return dilate(self, m, trunc)

    def dissect(self, k: int, r: int) -> PowerSeries:
        return dissect(self, k, r)

    def shift(self, s: int) -> PowerSeries:
        return shift(self, s)

    def reduce_mod(self, m: int) -> PowerSeries:
        return reduce_mod(self, m)


def make_series(ring: CoefficientRing, coeffs: Sequence[int]) -> PowerSeries:
    return PowerSeries(ring, coeffs)


def _schoolbook(a, b, n, modulus):
    # Outer loop over the sparser operand; Euler products are very sparse.
    if sum(1 for x in a if x) > sum(1 for x in b if x):
        a, b = b, a
    out = [0] * (n + 1)
    b = list(b)
    for i, ai in enumerate(a):
        if ai:
            out[i:] = [x + ai * y for x, y in zip(out[i:], b)]
    if modulus is not None:
        return [x % modulus for x in out]
    return out


def _pack(values, width):
    return int.from_bytes(b"".join(v.to_bytes(width, "little") for v in values), "little")


def _kronecker(a, b, n, modulus):
    """Multiply by evaluating both operands at 2**(8*width) and unpacking.

    Signed coefficients are handled by packing the positive and negative
    parts separately and decoding the product in balanced digits.
    """
    ma, mb = max(map(abs, a)), max(map(abs, b))
    # slots must hold each operand coefficient as well as each output sum
    bits = max((n + 1) * ma * mb, ma, mb).bit_length() + 2
    width = (bits + 7) // 8
    half = 1 << (8 * width - 1)

    def pack_signed(v):
        pos = _pack([x if x > 0 else 0 for x in v], width)
        neg = _pack([-x if x < 0 else 0 for x in v], width)
        return pos - neg

    prod = pack_signed(a) * pack_signed(b)
    total = width * (n + 1)
    raw = (prod & ((1 << (8 * total)) - 1)).to_bytes(total, "little")
    out = []
    carry = 0
    full = 1 << (8 * width)
    for i in range(0, total, width):
        d = int.from_bytes(raw[i : i + width], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out.append(d)
    if modulus is not None:
        return [x % modulus for x in out]
    return out


def add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    return a + b


def mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    return a * b


def invert(a: PowerSeries) -> PowerSeries:
    """Reciprocal via d_0 = 1/c_0, d_n = -(1/c_0) * sum_{k>=1} c_k d_{n-k}."""
    ring = a.ring
    c0 = a.coeffs[0]
    if not ring.is_unit(c0):
        raise NotInvertible(f"constant term {c0} is not a unit in {ring}")
    inv0 = ring.inverse(c0)
    m = ring.modulus
    support = [(k, c) for k, c in enumerate(a.coeffs) if k and c]
    d = [inv0]
    for n in range(1, a.trunc + 1):
        s = 0
        for k, c in support:
            if k > n:
                break
            s += c * d[n - k]
        s = -inv0 * s
        d.append(s % m if m is not None else s)
    return PowerSeries._raw(ring, d)


def power(a: PowerSeries, e: int) -> PowerSeries:
    if e < 0:
        return power(invert(a), -e)
    result = PowerSeries.one(a.ring, a.trunc)
    base = a
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


pow_series = power


def dilate(a: PowerSeries, m: int, trunc: int | None = None) -> PowerSeries:
    """Substitute q -> q**m.

    The result keeps ``a.trunc`` unless ``trunc`` asks for more; at most
    ``m * (a.trunc + 1) - 1`` is known.
    """
    if m < 1:
        raise SeriesError(f"dilation factor must be >= 1, got {m}")
    if trunc is None:
        trunc = a.trunc
    limit = m * (a.trunc + 1) - 1
    if trunc > limit:
        raise TruncationError(f"dilation by {m} of a series through q^{a.trunc} is known only through q^{limit}")
    out = [0] * (trunc + 1)
    for n, c in enumerate(a.coeffs):
        if m * n > trunc:
            break
        out[m * n] = c
    return PowerSeries._raw(a.ring, out)


def dissect(a: PowerSeries, k: int, r: int) -> PowerSeries:
    """Coefficients on the progression k*n + r, reindexed by n."""
    if k < 1 or not 0 <= r < k:
        raise SeriesError(f"need k >= 1 and 0 <= r < k, got k={k}, r={r}")
    if a.trunc < r:
        raise TruncationError("truncation too small to dissect")
    return PowerSeries._raw(a.ring, a.coeffs[r::k])


def shift(a: PowerSeries, s: int) -> PowerSeries:
    """Multiply by q**s.

    Negative ``s`` divides by ``q**-s`` and requires the dropped leading
    coefficients to vanish.
    """
    if s >= 0:
        return PowerSeries._raw(a.ring, (0,) * s + a.coeffs)
    s = -s
    if s > a.trunc:
        raise TruncationError(f"cannot divide a series through q^{a.trunc} by q^{s}")
    if any(a.coeffs[:s]):
        raise SeriesError(f"series is not divisible by q^{s}: leading coefficients {a.coeffs[:s]}")
    return PowerSeries._raw(a.ring, a.coeffs[s:])


def reduce_mod(a: PowerSeries, m: int) -> PowerSeries:
    if not a.ring.is_exact:
        raise SeriesError(f"reduce_mod expects an exact series, got one over {a.ring}")
    return PowerSeries(Modular(m), a.coeffs)


def coeff(a: PowerSeries, n: int) -> int:
    return a.coeff(n)


# -- serialization ---------------------------------------------------------


def to_csv(a: PowerSeries) -> str:
    lines = ["n,coefficient"]
    lines += [f"{n},{c}" for n, c in enumerate(a.coeffs)]
    return "\n".join(lines) + "\n"


def to_plain(a: PowerSeries) -> str:
    return ",".join(str(c) for c in a.coeffs)


def to_dict(a: PowerSeries) -> dict:
    coeffs = [str(c) for c in a.coeffs] if a.ring.is_exact else list(a.coeffs)
    return {"ring": str(a.ring), "trunc": a.trunc, "coeffs": coeffs}


def from_dict(d: dict) -> PowerSeries:
    ring = CoefficientRing.parse(d["ring"])
    s = PowerSeries(ring, [int(c) for c in d["coeffs"]])
    if s.trunc != d["trunc"]:
        raise SeriesError(f"trunc {d['trunc']} disagrees with {len(s.coeffs)} coefficients")
    return s


def to_json(a: PowerSeries) -> str:
    return json.dumps(to_dict(a))


def from_json(text: str) -> PowerSeries:
    return from_dict(json.loads(text))
