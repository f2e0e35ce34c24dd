from fractions import Fraction as F
from math import comb, factorial

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aggrec.algebra import BiPoly, radical_value
from aggrec.dfinite import AlgebraicFunction
from aggrec.series import (
    SeriesExact,
    algebraic_residual,
    bessel_k,
    bessel_k_derivative,
    compose_coeffs,
    exp_shifted_coeffs,
    gamma_eval,
    mul_trunc,
    power_coeffs,
    reciprocal_coeffs,
    series_algebraic,
    series_algebraic_float,
    series_arith,
)

coeff_lists = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=7), min_size=1, max_size=8)


def one_minus_z_sqrt():
    # y^2 = 1 - z, y(0) = 1
    return AlgebraicFunction(BiPoly.y() ** 2 - BiPoly.from_terms({(0, 0): 1, (1, 0): -1}), 1)


def test_sqrt_one_minus_z_matches_binomial_formula():
    N = 40
    s = series_algebraic(one_minus_z_sqrt(), N)
    expected = [F(comb(2 * n, n), (1 - 2 * n) * 4**n) for n in range(N + 1)]
    assert list(s.coeffs) == expected
    assert all(r == 0 for r in algebraic_residual(one_minus_z_sqrt(), s))


def test_numeric_lift_matches_exact():
    g = one_minus_z_sqrt()
    exact = series_algebraic(g, 30)
    num = series_algebraic(g, 30, digits=40)
    with mpmath.workdps(40):
        for a, b in zip(exact.coeffs, num.coeffs):
            assert abs(mpmath.mpf(a.numerator) / a.denominator - b) < mpmath.mpf(10) ** -38


def test_radical_branch_value():
    # y^2 = 2 - z, y(0) = sqrt 2; compare with mpmath's Taylor coefficients of sqrt(2 - z)
    g = AlgebraicFunction(BiPoly.y() ** 2 - BiPoly.from_terms({(0, 0): 2, (1, 0): -1}), radical_value(F(2), 2))
    exact = series_algebraic(g, 12, keep_radical=True)
    with mpmath.workdps(40):
        ref = mpmath.taylor(lambda z: mpmath.sqrt(2 - z), 0, 12)
        for a, b in zip(exact.coeffs, ref):
            assert abs(a.to_mpf() - b) < mpmath.mpf(10) ** -35


def test_float_lift_against_exact():
    g = one_minus_z_sqrt()
    exact = series_algebraic(g, 200)
    fl = series_algebraic_float(g, 200)
    ref = np.array([float(c) for c in exact.coeffs])
    assert np.max(np.abs(fl - ref)) < 1e-15


@given(coeff_lists, coeff_lists)
def test_mul_is_commutative_and_matches_naive(a, b):
    n = 8
    naive = [sum((a[j] if j < len(a) else 0) * (b[i - j] if i - j < len(b) else 0) for j in range(i + 1))
             for i in range(n)]
    assert mul_trunc(a, b, n) == naive
    assert mul_trunc(b, a, n) == naive


@given(coeff_lists.filter(lambda a: a[0] != 0))
def test_reciprocal_inverts(a):
    n = 10
    inv = reciprocal_coeffs(a, n)
    prod = mul_trunc(a, inv, n)
    assert prod == [F(1)] + [F(0)] * (n - 1)


@given(coeff_lists, coeff_lists)
def test_compose_matches_power_sum(a, b):
    n = 8
    b = [F(0)] + b
    expected, power = [F(0)] * n, [F(1)] + [F(0)] * (n - 1)
    for ak in a:
        expected = [e + ak * p for e, p in zip(expected, power)]
        power = mul_trunc(power, b, n)
    assert compose_coeffs(a, b, n) == expected


def test_compose_rejects_nonzero_constant():
    with pytest.raises(ValueError):
        compose_coeffs([1, 1], [1, 1], 4)


def test_exp_shifted_and_power():
    n = 15
    # exp(2 (z - 0)) = sum 2^k z^k / k!
    assert exp_shifted_coeffs(F(2), [F(0), F(1)], n) == [F(2**k, factorial(k)) for k in range(n)]
    # (1 + z)^(1/2) against the generalized binomial coefficients
    assert power_coeffs([F(1), F(1)], F(1, 2), n) == [_gbinom(F(1, 2), k) for k in range(n)]


def _gbinom(alpha, k):
    out = F(1)
    for j in range(k):
        out = out * (alpha - j) / (j + 1)
    return out


def test_series_arith_dispatch():
    a = SeriesExact([F(1), F(1)], 5)
    r = series_arith(a, None, "reciprocal")
    assert list(r.coeffs) == [F((-1) ** k) for k in range(6)]
    assert list(series_arith(a, r, "mul").coeffs) == [F(1)] + [F(0)] * 5
    num = a.to_numeric(30)
    mixed = series_arith(num, r, "add")
    assert not mixed.exact and mixed.digits == 30
    with pytest.raises(ValueError):
        series_arith(a, a, "divide")


@pytest.mark.parametrize("theta,x", [(F(2, 3), F(2)), (F(1, 2), F(1, 10)), (F(-5, 4), F(7)), (F(7, 3), F(30))])
def test_bessel_k_against_mpmath(theta, x):
    with mpmath.workdps(60):
        ref = mpmath.besselk(mpmath.mpf(theta.numerator) / theta.denominator, mpmath.mpf(x.numerator) / x.denominator)
        dref = mpmath.diff(lambda t: mpmath.besselk(mpmath.mpf(theta.numerator) / theta.denominator, t),
                           mpmath.mpf(x.numerator) / x.denominator)
        assert abs(bessel_k(theta, x, 40) / ref - 1) < mpmath.mpf(10) ** -38
        assert abs(bessel_k_derivative(theta, x, 40) / dref - 1) < mpmath.mpf(10) ** -35


def test_bessel_k_rejects_integer_order():
    with pytest.raises(ValueError):
        bessel_k(F(1), F(2))


def test_gamma_eval():
    with mpmath.workdps(50):
        assert abs(gamma_eval(F(1, 2), 40) - mpmath.sqrt(mpmath.pi)) < mpmath.mpf(10) ** -39
    assert gamma_eval(5) == 24
    with pytest.raises(ValueError):
        gamma_eval(-1)
