from hypothesis import given, settings
from hypothesis import strategies as st

from qcong.partitions import a_c_series, b_series
from qcong.products import EtaQuotient, chu_f10_rhs, eta_quotient, euler_f, f2_6_lattice, jacobi_cube
from qcong.series import (
    EXACT,
    Modular,
    PowerSeries,
    dilate,
    dissect,
    invert,
    reduce_mod,
    set_accelerated,
    shift,
)

rings = st.sampled_from([EXACT, Modular(2), Modular(7), Modular(11), Modular(49), Modular(2**31 - 1)])
coeff = st.integers(min_value=-(10**6), max_value=10**6)


@st.composite
def series(draw, ring=None, trunc=None, unit=False):
    ring = draw(rings) if ring is None else ring
    n = draw(st.integers(0, 25)) if trunc is None else trunc
    cs = draw(st.lists(coeff, min_size=n + 1, max_size=n + 1))
    if unit:
        if ring.is_exact:
            cs[0] = draw(st.sampled_from([1, -1]))
        else:
            m = ring.modulus
            cs[0] = draw(st.integers(1, m - 1).filter(lambda x: ring.is_unit(x)))
    return PowerSeries(ring, cs)


@st.composite
def same_ring_triple(draw):
    ring = draw(rings)
    return draw(series(ring)), draw(series(ring)), draw(series(ring))


@given(same_ring_triple())
def test_ring_axioms(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=100)
@given(st.data())
def test_invert_contract(data):
    ring = data.draw(rings)
    a = data.draw(series(ring, unit=True))
    prod = a * invert(a)
    assert prod.coeffs == (1,) + (0,) * a.trunc


@given(series(), st.integers(1, 9))
def test_dissection_reconstructs(a, k):
    total = PowerSeries.zero(a.ring, a.trunc)
    for r in range(min(k, a.trunc + 1)):
        part = dilate(dissect(a, k, r), k, a.trunc - r)
        total = total + shift(part, r)
    assert total == a


@given(series(), st.integers(1, 9))
def test_dilate_dissect_roundtrip(a, m):
    assert dissect(dilate(a, m), m, 0) == a.truncate(a.trunc // m)


@given(series(ring=EXACT), series(ring=EXACT), st.integers(2, 1000))
def test_reduce_is_homomorphism(a, b, m):
    assert reduce_mod(a * b, m) == reduce_mod(a, m) * reduce_mod(b, m)
    assert reduce_mod(a + b, m) == reduce_mod(a, m) + reduce_mod(b, m)


@given(st.integers(0, 40), st.integers(0, 40), series())
def test_prefix_stability_of_operations(n, extra, a):
    n = min(n, a.trunc)
    b = a.truncate(n)
    assert (a * a).truncate(n) == b * b
    if a.ring.is_unit(a.coeffs[0]):
        assert invert(a).truncate(n) == invert(b)
    assert dilate(a, 3).truncate(n) == dilate(b, 3)


@given(same_ring_triple())
def test_accelerated_bit_identical(abc):
    a, b, _ = abc
    plain = a * b
    old = set_accelerated(True)
    try:
        assert a * b == plain
    finally:
        set_accelerated(old)


CONSTRUCTORS = {
    "euler_f(7)": lambda N, R: euler_f(7, N, R),
    "eta f1^-1 f2^3 f14^-1 f98^-2": lambda N, R: eta_quotient(EtaQuotient.of({1: -1, 2: 3, 14: -1, 98: -2}), N, R),
    "a_5": lambda N, R: a_c_series(5, N, R),
    "b": lambda N, R: b_series(N, R),
    "jacobi_cube": jacobi_cube,
    "f2_6_lattice": f2_6_lattice,
    "chu_f10_rhs": chu_f10_rhs,
}


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(CONSTRUCTORS)), st.integers(0, 150), st.sampled_from([EXACT, Modular(7), Modular(11)]))
def test_constructor_prefix_stability(name, N, ring):
    build = CONSTRUCTORS[name]
    assert build(2 * N + 1, ring).truncate(N) == build(N, ring)
