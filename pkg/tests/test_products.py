from fractions import Fraction

import pytest

from qcong.products import (
    ALL_INTEGERS,
    JACOBI,
    EtaParseError,
    EtaQuotient,
    ThetaSum,
    chu_a,
    chu_f10,
    chu_f10_rhs,
    chu_f2_10_lattice,
    eta_quotient,
    euler_f,
    f2_6_lattice,
    jacobi_cube,
    parse_eta_quotient,
    theta_sum,
)
from qcong.series import EXACT, Modular, SeriesError, dilate, power

from oracles import naive_eta


def test_euler_f_small():
    assert euler_f(1, 12).coeffs == (1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1)
    assert euler_f(2, 4).coeffs == (1, 0, -1, 0, -1)
    assert euler_f(1, 0).coeffs == (1,)


@pytest.mark.parametrize("m", [1, 2, 7, 11, 14, 22, 98, 242])
def test_euler_f_matches_finite_product(m):
    assert list(euler_f(m, 300).coeffs) == naive_eta([(m, 1)], 300)


def test_euler_f_modular():
    assert euler_f(1, 12, Modular(7)).coeffs == tuple(x % 7 for x in naive_eta([(1, 1)], 12))


def test_eta_quotient_canonical_form():
    q = EtaQuotient(((2, 3), (1, -1), (2, -3), (5, 2)))
    assert q.factors == ((1, -1), (5, 2))
    assert EtaQuotient.of({1: -1, 2: 3}) == EtaQuotient(((2, 3), (1, -1)))
    with pytest.raises(SeriesError):
        EtaQuotient(((0, 1),))


def test_eta_quotient_values():
    assert list(eta_quotient(EtaQuotient.of({1: -1}), 9).coeffs) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
    assert eta_quotient(EtaQuotient.of({2: 3, 1: -1}), 3).coeffs == (1, 1, -1, 0)
    assert eta_quotient(EtaQuotient(), 5).coeffs == (1, 0, 0, 0, 0, 0)


def test_eta_quotient_against_naive():
    factors = [(1, -1), (2, 3), (14, -1), (98, -2)]
    got = eta_quotient(EtaQuotient(tuple(factors)), 200)
    assert list(got.coeffs) == naive_eta(factors, 200)


@pytest.mark.parametrize(
    "text, factors",
    [
        ("f1^-1 * f2^-4", ((1, -1), (2, -4))),
        ("  f2^3*f1^-1 ", ((1, -1), (2, 3))),
        ("f1", ((1, 1),)),
        ("f14 ^ -1 * f1 ^ +2", ((1, 2), (14, -1))),
        ("1", ()),
    ],
)
def test_parse(text, factors):
    assert parse_eta_quotient(text).factors == factors


@pytest.mark.parametrize("text, token", [("f1^x", "f1^x"), ("f1 * g2", "g2"), ("f0^2", "f0^2"), ("f1^0", "f1^0"), ("f1**", "")])
def test_parse_errors_name_token(text, token):
    with pytest.raises(EtaParseError) as exc:
        parse_eta_quotient(text)
    assert exc.value.token == token


def test_str_round_trip():
    q = EtaQuotient.of({1: -1, 2: 3, 98: -5})
    assert parse_eta_quotient(str(q)) == q


def test_theta_jacobi():
    assert jacobi_cube(10).coeffs == (1, -3, 0, 5, 0, 0, -7, 0, 0, 0, 9)
    assert jacobi_cube(10).coeff(1) == -3


def test_theta_all_integers():
    spec = ThetaSum(a=3, b=1, e=1, alpha=3, beta=2, domain=ALL_INTEGERS)
    assert theta_sum(spec, 5).coeffs == (1, -2, 0, 0, 0, 4)
    assert theta_sum(spec, 0).coeffs == (1,)
    assert theta_sum(JACOBI, 0).coeffs == (1,)


def test_theta_indices_cover_both_sides():
    spec = chu_a(1)
    js = sorted(spec.indices(100))
    assert js == sorted(j for j in range(-20, 21) if j * (3 * j + 2) <= 100)


def test_theta_non_integer_exponent():
    spec = ThetaSum(a=1, b=0, e=1, alpha=Fraction(1, 2), beta=0)
    with pytest.raises(SeriesError):
        theta_sum(spec, 10)


def test_jacobi_cube_identity():
    assert jacobi_cube(400) == power(euler_f(1, 400), 3)
    assert jacobi_cube(400, Modular(7)) == power(euler_f(1, 400, Modular(7)), 3)
    assert dilate(jacobi_cube(200), 2) == power(euler_f(2, 200), 3)


def test_f2_6_lattice():
    f = f2_6_lattice(200)
    assert f == power(euler_f(2, 200), 6)
    assert f.coeff(0) == 1
    assert f.coeff(3) == 0
    assert list(f2_6_lattice(12).coeffs) == naive_eta([(2, 6)], 12)


def test_chu_rhs():
    rhs = chu_f10_rhs(300)
    assert rhs.coeff(0) == 3
    assert rhs == 3 * power(euler_f(1, 300), 10)
    assert list(chu_f10_rhs(12).coeffs) == [3 * x for x in naive_eta([(1, 10)], 12)]
    assert chu_f2_10_lattice(300) == dilate(rhs, 2)


def test_chu_division_by_three():
    assert chu_f10(200) == power(euler_f(1, 200), 10)
    assert chu_f10(200, Modular(11)) == power(euler_f(1, 200, Modular(11)), 10)
    with pytest.raises(SeriesError):
        chu_f10(10, Modular(9))
