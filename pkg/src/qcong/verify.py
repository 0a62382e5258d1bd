"""Congruence checking, proof replay and a congruence scanner.

Everything here is a finite-order check.  A ``verified`` report means the
stated coefficients were computed and found to vanish, nothing more.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Union

from .partitions import a_c_oracle, a_c_series, b_series
from .products import EtaQuotient, chu_f2_10_terms, eta_quotient, euler_f, f2_6_terms
from .series import EXACT, Modular, PowerSeries, SeriesError, dilate, dissect, power, shift

DEFAULT_MAX_TRUNC = 200_000
MIN_WITNESSES = 50


class TruncationBudgetExceeded(SeriesError):
    def __init__(self, step: str, needed: int, ceiling: int):
        super().__init__(f"{step}: needs truncation {needed}, ceiling is {ceiling} (set Q_MAX_TRUNC to raise it)")
        self.step = step
        self.needed = needed
        self.ceiling = ceiling


def max_trunc() -> int:
    return int(os.environ.get("Q_MAX_TRUNC", DEFAULT_MAX_TRUNC))


def check_budget(step: str, needed: int) -> None:
    ceiling = max_trunc()
    if needed > ceiling:
        raise TruncationBudgetExceeded(step, needed, ceiling)


# -- families and claims ---------------------------------------------------


@dataclass(frozen=True)
class GeneralizedCubic:
    c: int

    def __post_init__(self):
        if self.c < 1:
            raise SeriesError(f"color count must be >= 1, got {self.c}")

    def series(self, N, ring=EXACT):
        return a_c_series(self.c, N, ring)

    def oracle(self, n):
        return a_c_oracle(self.c, n)

    def name(self, arg: str) -> str:
        return f"a_{self.c}({arg})"

    def __str__(self):
        return f"cubic:{self.c}"


@dataclass(frozen=True)
class ClassicalPartition:
    def series(self, N, ring=EXACT):
        return a_c_series(1, N, ring)

    def oracle(self, n):
        return a_c_oracle(1, n)

    def name(self, arg: str) -> str:
        return f"p({arg})"

    def __str__(self):
        return "classical"


@dataclass(frozen=True)
class BSeries:
    def series(self, N, ring=EXACT):
        return b_series(N, ring)

    oracle = None

    def name(self, arg: str) -> str:
        return f"b({arg})"

    def __str__(self):
        return "b"


Family = Union[GeneralizedCubic, ClassicalPartition, BSeries]


def parse_family(text: str) -> Family:
    if text == "classical":
        return ClassicalPartition()
    if text == "b":
        return BSeries()
    if text.startswith("cubic:"):
        return GeneralizedCubic(int(text[6:]))
    raise SeriesError(f"unknown family {text!r}")


@dataclass(frozen=True)
class CongruenceClaim:
    """``family(A n + B) = 0 (mod modulus)`` for ``0 <= n <= n_max``."""

    family: Family
    A: int
    B: int
    modulus: int
    n_max: int
    name: str | None = None

    def __post_init__(self):
        if self.A < 1:
            raise SeriesError(f"progression step must be >= 1, got {self.A}")
        if self.B < 0:
            raise SeriesError(f"progression offset must be >= 0, got {self.B}")
        if self.modulus < 2:
            raise SeriesError(f"modulus must be >= 2, got {self.modulus}")
        if self.n_max < 0:
            raise SeriesError("n_max must be >= 0")

    @property
    def statement(self) -> str:
        return f"{self.family.name(f'{self.A}n+{self.B}')} = 0 mod {self.modulus}"

    @property
    def id(self) -> str:
        return self.name or self.statement

    def shifted(self, by: int = 1, n_max: int | None = None) -> CongruenceClaim:
        return replace(self, B=self.B + by, n_max=self.n_max if n_max is None else n_max, name=None)

    def to_dict(self) -> dict:
        return {"family": str(self.family), "A": self.A, "B": self.B, "modulus": self.modulus, "n_max": self.n_max}

    @classmethod
    def from_dict(cls, d: dict) -> CongruenceClaim:
        return cls(parse_family(d["family"]), d["A"], d["B"], d["modulus"], d["n_max"])


# -- reports ---------------------------------------------------------------


class Status(str, Enum):
    VERIFIED = "verified"
    COUNTEREXAMPLE = "counterexample"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class VerificationReport:
    id: str
    status: Status
    n_max: int
    counterexamples: tuple[tuple[int, str], ...] = ()
    notes: tuple[str, ...] = ()
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if (self.status is Status.COUNTEREXAMPLE) != bool(self.counterexamples):
            raise SeriesError("status must be 'counterexample' exactly when counterexamples are listed")

    @property
    def ok(self) -> bool:
        return self.status is Status.VERIFIED

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "status": self.status.value,
            "range": {"n_max": self.n_max},
            "counterexamples": [{"n": n, "value": v} for n, v in self.counterexamples],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        return cls(
            id=d["id"],
            status=Status(d["status"]),
            n_max=d["range"]["n_max"],
            counterexamples=tuple((c["n"], c["value"]) for c in d["counterexamples"]),
            notes=tuple(d["notes"]),
        )

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        return cls.from_dict(json.loads(text))

    def __str__(self):
        line = f"{self.status.value:<14} {self.id}  [n <= {self.n_max}]"
        if self.counterexamples:
            shown = ", ".join(f"n={n}: {v}" for n, v in self.counterexamples[:5])
            more = f" (+{len(self.counterexamples) - 5} more)" if len(self.counterexamples) > 5 else ""
            line += f"  counterexamples: {shown}{more}"
        return line


def _report(id, n_max, bad, notes=(), started=None):
    bad = tuple(bad)
    return VerificationReport(
        id=id,
        status=Status.COUNTEREXAMPLE if bad else Status.VERIFIED,
        n_max=n_max,
        counterexamples=bad,
        notes=tuple(notes),
        wall_time=time.perf_counter() - started if started else 0.0,
    )


def _mismatches(x: PowerSeries, y: PowerSeries, what: str = ""):
    n = min(x.trunc, y.trunc)
    prefix = f"{what}: " if what else ""
    return [(i, f"{prefix}{u} != {v}") for i, (u, v) in enumerate(zip(x.coeffs[: n + 1], y.coeffs)) if u != v]


def _nonzero(x: PowerSeries, what: str = "", index=lambda i: i):
    prefix = f"{what}: " if what else ""
    return [(index(i), f"{prefix}{c}") for i, c in enumerate(x.coeffs) if c]


def run_ordered(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- claim checking --------------------------------------------------------


def verify_claim(claim: CongruenceClaim, n_terms: int | None = None, cross_check: bool = False) -> VerificationReport:
    """Check every coefficient at ``A n + B`` for ``n <= n_terms`` in Z/modulus.

    With ``cross_check`` the residues are also compared against the
    enumeration oracle where one exists.
    """
    started = time.perf_counter()
    n_terms = claim.n_max if n_terms is None else n_terms
    top = claim.A * n_terms + claim.B
    check_budget(claim.id, top)
    s = claim.family.series(top, Modular(claim.modulus))
    values = s.coeffs[claim.B :: claim.A]
    bad = [(n, str(v)) for n, v in enumerate(values) if v]
    notes = [claim.statement] if claim.name else []
    if cross_check and claim.family.oracle is not None:
        mismatched = [
            n for n, v in enumerate(values) if claim.family.oracle(claim.A * n + claim.B) % claim.modulus != v
        ]
        if mismatched:
            bad += [(n, "series residue disagrees with oracle") for n in mismatched]
            bad.sort(key=lambda x: x[0])
        notes.append(f"oracle cross-check: {len(values) - len(mismatched)}/{len(values)} agree")
    return _report(claim.id, n_terms, bad, notes, started)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_binomial_lemma(p: int, m: int, N: int) -> VerificationReport:
    """f_m^p = f_{pm} (mod p) through q^N."""
    if not is_prime(p):
        raise SeriesError(f"{p} is not prime")
    started = time.perf_counter()
    ring = Modular(p)
    lhs = power(euler_f(m, N, ring), p)
    rhs = euler_f(p * m, N, ring)
    return _report(f"binomial f{m}^{p} = f{p * m} mod {p}", N, _mismatches(lhs, rhs), started=started)


# Ahlgren's theorem at (p, r, s) = (p, -1, 3): b(p n + offset) vanishes off
# multiples of p and b(p^2 m + offset) = sign * b(m).
AHLGREN = {7: (10, 1), 11: (25, -1)}


def check_ahlgren_instance(p: int, N: int) -> VerificationReport:
    if p not in AHLGREN:
        raise SeriesError(f"only p in {sorted(AHLGREN)} are covered, got {p}")
    started = time.perf_counter()
    offset, sign = AHLGREN[p]
    top = p * N + offset
    check_budget(f"ahlgren p={p}", top)
    b = b_series(top, EXACT)
    bad = []
    for n in range(N + 1):
        v = b.coeffs[p * n + offset]
        want = sign * b.coeffs[n // p] if n % p == 0 else 0
        if v != want:
            bad.append((n, f"b({p * n + offset}) = {v}, expected {want}"))
    sign_text = "" if sign > 0 else "-"
    return _report(f"ahlgren b({p}n+{offset}) = {sign_text}b(n/{p})", N, bad, started=started)


def qr_forced_zero(p: int) -> bool:
    """Whether x^2 + y^2 = 0 (mod p) forces x = y = 0 (mod p)."""
    if p < 3 or not is_prime(p):
        raise SeriesError(f"{p} is not an odd prime")
    squares = [x * x % p for x in range(p)]
    return all(x == 0 and y == 0 for x in range(p) for y in range(p) if (squares[x] + squares[y]) % p == 0)


F2_POW6_MOD7 = "F2_POW6_MOD7"
F2_POW10_MOD11 = "F2_POW10_MOD11"


def check_support_vanishing(which: str, N: int) -> VerificationReport:
    """Coefficients of f_2^6 on exponents 3 mod 7 vanish mod 7, and those of
    3 f_2^10 on exponents 1 mod 11 vanish mod 11.

    The notes record two stronger facts that are observed, not required:
    each contributing lattice term has both linear factors divisible by p,
    and the coefficients vanish modulo p^2.
    """
    started = time.perf_counter()
    if which == F2_POW6_MOD7:
        p, r = 7, 3
        s = power(euler_f(2, N), 6)
        terms = [(2 * j + 1, 2 * k + 1) for j, k, g in f2_6_terms(N) if g % p == r]
        label = "f2^6"
    elif which == F2_POW10_MOD11:
        p, r = 11, 1
        s = 3 * power(euler_f(2, N), 10)
        terms = [(3 * j + 1, 6 * k + 1) for j, k, _, g in chu_f2_10_terms(N) if g % p == r]
        label = "3 f2^10"
    else:
        raise SeriesError(f"unknown support check {which!r}")
    on_class = [(n, s.coeffs[n]) for n in range(r, N + 1, p)]
    bad = [(n, str(v)) for n, v in on_class if v % p]
    forced = sum(1 for x, y in terms if x % p == 0 and y % p == 0)
    square = sum(1 for _, v in on_class if v % (p * p) == 0)
    notes = [
        f"lattice terms on the class with both factors divisible by {p}: {forced}/{len(terms)}",
        f"coefficients on the class divisible by {p * p}: {square}/{len(on_class)} (informational)",
    ]
    return _report(f"support {label} at exponents {r} mod {p} = 0 mod {p}", N, bad, notes, started)


# -- proof replay ----------------------------------------------------------


@dataclass(frozen=True)
class _Branch:
    p: int
    offset: int  # a(p n + offset) after the Ahlgren substitution
    sign: int
    residue: int  # class of the theta-power support argument

    @property
    def lead(self) -> int:
        # a(p n + 3) dissected series must be divided by q^lead
        return (self.offset - 3) // self.p

    def colors(self, c: int) -> int:
        return self.p * self.p * c + self.p - 2

    @property
    def final_offset(self) -> int:
        return self.p * self.residue + self.offset


BRANCHES = {7: _Branch(7, 10, 1, 3), 11: _Branch(11, 25, -1, 1)}

DEFAULT_REPLAY_N = {7: 1500, 11: 2500}


def replay_proof(p: int, c_max: int, N: int | None = None, threads: int = 1) -> list[VerificationReport]:
    """Replay each step of the proof for c = 0..c_max as truncated congruences mod p."""
    if p not in BRANCHES:
        raise SeriesError(f"replay covers p in {sorted(BRANCHES)}, got {p}")
    if c_max < 0:
        raise SeriesError("c_max must be >= 0")
    br = BRANCHES[p]
    N = DEFAULT_REPLAY_N[p] if N is None else N
    if N < br.final_offset:
        raise SeriesError(f"truncation {N} is below the first checked index {br.final_offset}")
    check_budget(f"replay-p{p}", N)
    per_c = run_ordered(lambda c: _replay_one(br, c, N), range(c_max + 1), threads)
    return [r for group in per_c for r in group]


def _replay_one(br: _Branch, c: int, N: int) -> list[VerificationReport]:
    p = br.p
    ring = Modular(p)
    k = br.colors(c)
    tag = f"replay-p{p}-c{c}"
    out = []

    def eta(factors, n):
        return eta_quotient(EtaQuotient.of(factors), n, ring)

    # 1. binomial reduction of the generating function
    t0 = time.perf_counter()
    lhs = a_c_series(k, N, ring)
    b = b_series(N, ring)
    reduced = eta({1: -1, 2: 3, 2 * p: -1, 2 * p * p: -c}, N)
    via_b = eta({2 * p: -1, 2 * p * p: -c}, N) * b
    bad = _mismatches(lhs, reduced, f"1/(f1 f2^{k - 1}) vs reduced quotient")
    bad += _mismatches(lhs, via_b, "vs b-series form")
    out.append(_report(f"{tag}-1-base-reduction", N, sorted(bad), [f"a_{k} = 1/(f1 f2^{k - 1})"], t0))

    # 2. dissection along p n + 3
    t0 = time.perf_counter()
    d = dissect(lhs, p, 3)
    M = d.trunc
    rhs = eta({2: -1, 2 * p: -c}, M) * dissect(b, p, 3)
    bad = _mismatches(d, rhs, f"a_{k}({p}n+3) vs dissected b-form")
    lead = [(i, f"a_{k}({p * i + 3}) = {d.coeffs[i]} mod {p}") for i in range(br.lead) if d.coeffs[i]]
    notes = [f"a_{k}({', '.join(str(p * i + 3) for i in range(br.lead))}) = 0 mod {p}"]
    out.append(_report(f"{tag}-2-dissection", M, sorted(bad + lead), notes, t0))

    # 3. substitute the Ahlgren instance
    t0 = time.perf_counter()
    try:
        shifted = shift(d, -br.lead)
        b_shift = shift(dissect(b, p, 3), -br.lead)
    except SeriesError as exc:
        out.append(_report(f"{tag}-3-ahlgren-substitution", M, [(0, str(exc))], started=t0))
        return out
    M3 = shifted.trunc
    b_dil = dilate(b_series(M3 // p, ring), p, M3).scale(br.sign)
    middle = eta({2: -1, 2 * p: -c}, M3) * b_dil
    outer = eta({2 * p: -(c + 1)}, M3) * b_dil
    theta_power = eta({2: p - 1}, M3)
    final = outer * theta_power
    bad = _mismatches(b_shift, b_dil, f"b({p}n+{br.offset}) vs dilated b")
    bad += _mismatches(shifted, middle, f"a_{k}({p}n+{br.offset}) vs substituted form")
    bad += _mismatches(shifted, final, f"a_{k}({p}n+{br.offset}) vs f2^{p - 1} product form")
    out.append(_report(f"{tag}-3-ahlgren-substitution", M3, sorted(bad), started=t0))

    # 4. the f2^(p-1) factor has no support on the residue class; the other factor lives on q^p
    t0 = time.perf_counter()
    bad = _nonzero(dissect(theta_power, p, br.residue), f"f2^{p - 1} at {p}n+{br.residue}", lambda i: p * i + br.residue)
    for r in range(1, p):
        if r <= M3:
            bad += _nonzero(dissect(outer, p, r), f"q^{p}-factor at {p}n+{r}", lambda i, r=r: p * i + r)
    bad += _nonzero(dissect(final, p, br.residue), f"product at {p}n+{br.residue}", lambda i: p * i + br.residue)
    out.append(_report(f"{tag}-4-support-vanishing", M3, sorted(bad), started=t0))

    # 5. the congruence itself, read straight off the generating function
    t0 = time.perf_counter()
    A, B = p * p, br.final_offset
    claim = CongruenceClaim(GeneralizedCubic(k), A, B, p, (N - B) // A)
    r = verify_claim(claim)
    notes = [f"{claim.statement} for n <= {claim.n_max}"]
    out.append(_report(f"{tag}-5-final-congruence", claim.n_max, r.counterexamples, notes, t0))
    return out


# -- cited congruences -----------------------------------------------------


def offset_for(unit: int, modulus: int) -> int:
    """Smallest delta >= 0 with unit * delta = 1 (mod modulus)."""
    return pow(unit, -1, modulus)


def watson_atkin_beta(ell: int, alpha: int) -> int:
    return alpha // 2 + 1 if ell == 7 else alpha


def dockery_offset(alpha: int) -> int:
    return 20 + 19 * 25 * (25 ** (alpha - 1) - 1) // 24


def cited_claims() -> list[CongruenceClaim]:
    p, a2, a3 = ClassicalPartition(), GeneralizedCubic(2), GeneralizedCubic(3)
    claims = [
        CongruenceClaim(p, 5, 4, 5, 100, "ramanujan p(5n+4) mod 5"),
        CongruenceClaim(p, 7, 5, 7, 100, "ramanujan p(7n+5) mod 7"),
        CongruenceClaim(p, 11, 6, 11, 100, "ramanujan p(11n+6) mod 11"),
    ]
    for ell in (5, 7, 11):
        A = ell**2
        M = ell ** watson_atkin_beta(ell, 2)
        claims.append(CongruenceClaim(p, A, offset_for(24, A), M, 40, f"watson-atkin l={ell} alpha=2"))
    for alpha, n_max in ((2, 60), (3, 20)):
        A = 5**alpha
        claims.append(CongruenceClaim(a2, A, offset_for(8, A), 5 ** (alpha // 2), n_max, f"chan-toh alpha={alpha}"))
    # The a_3 family is listed verbatim with step 5^alpha, and again with step
    # 25^alpha, the only form the computed coefficients support.
    for alpha, n_max in ((1, 100), (2, 40)):
        B = dockery_offset(alpha)
        claims.append(CongruenceClaim(a3, 5**alpha, B, 5**alpha, n_max, f"dockery alpha={alpha}"))
        claims.append(CongruenceClaim(a3, 25**alpha, B, 5**alpha, n_max // 4, f"dockery alpha={alpha} step 25^alpha"))
    claims += [
        CongruenceClaim(GeneralizedCubic(5), 49, 31, 7, 20, "dockery a_5(49n+31) mod 7"),
        CongruenceClaim(GeneralizedCubic(9), 121, 36, 11, 20, "dockery a_9(121n+36) mod 11"),
    ]
    return claims


def cited_congruence_suite(n_terms: int | None = None, threads: int = 1) -> list[VerificationReport]:
    return run_ordered(lambda cl: verify_claim(cl, n_terms), cited_claims(), threads)


# -- scanning --------------------------------------------------------------


@dataclass(frozen=True)
class ScanReport:
    status: Status
    witnesses: int
    candidates: tuple[CongruenceClaim, ...] = ()

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "witnesses": self.witnesses,
            "candidates": [c.to_dict() for c in self.candidates],
        }


def scan_congruences(
    family: Family, modulus: int, A_candidates: Iterable[int], n_terms: int, threads: int = 1
) -> ScanReport:
    """Find every (A, B) with all sampled coefficients at A n + B vanishing mod ``modulus``.

    Candidates are evidence only.  With fewer than ``MIN_WITNESSES`` samples
    per progression nothing is declared and the report is skipped.
    """
    witnesses = n_terms + 1
    if witnesses < MIN_WITNESSES:
        return ScanReport(Status.SKIPPED, witnesses)
    steps = sorted(set(A_candidates))
    if not steps:
        return ScanReport(Status.VERIFIED, witnesses)
    top = max(steps) * (n_terms + 1) - 1
    check_budget(f"scan {family}", top)
    s = family.series(top, Modular(modulus))

    def scan_one(A):
        found = []
        for B in range(A):
            if not any(s.coeffs[B : A * n_terms + B + 1 : A]):
                found.append(CongruenceClaim(family, A, B, modulus, n_terms))
        return found

    found = [c for group in run_ordered(scan_one, steps, threads) for c in group]
    return ScanReport(Status.VERIFIED, witnesses, tuple(found))
