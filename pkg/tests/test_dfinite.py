from fractions import Fraction as F
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aggrec.algebra import BiPoly, Poly, rational_roots
from aggrec.dfinite import (
    AlgebraicFunction,
    LinearODE,
    PRecurrence,
    algebraic_to_ode,
    compose_algebraic,
    indicial_polynomial,
    ode_product,
    ode_sum,
    ode_to_recurrence,
    recurrence_to_inhomogeneous_ode,
    recurrence_to_ode,
)
from aggrec.risk import build_pgf_ode
from aggrec.series import series_algebraic, taylor_from_ode

EXP = LinearODE([Poly([-1]), Poly([1])])  # f' - f
COS = LinearODE([Poly([1]), Poly([0]), Poly([1])])  # f'' + f
N = 30

fracs = st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10)


def exp_coeffs(n, c=1):
    return [F(c) ** k / factorial(k) for k in range(n)]


def cos_coeffs(n):
    return [F((-1) ** (k // 2), factorial(k)) if k % 2 == 0 else F(0) for k in range(n)]


def binom_series(alpha, q, n):
    # coefficients of (1 - (1-q) z)^(-alpha)
    out, c = [], F(1)
    for k in range(n):
        out.append(c * (1 - q) ** k)
        c = c * (alpha + k) / (k + 1)
    return out


def annihilates(ode, a):
    return all(v == 0 for v in ode.apply_series(a))


def test_normalization_makes_operators_comparable():
    a = LinearODE([Poly([-2]), Poly([2])])
    assert a == EXP
    assert a.leading.coeffs[-1] > 0
    b = LinearODE([Poly([0, -1]), Poly([0, 1])])  # z f' - z f: polynomial content removed
    assert b == EXP


def test_exp_recurrence():
    r = ode_to_recurrence(EXP)
    assert r == PRecurrence([Poly([-1]), Poly([1, 1])])
    assert all(v == 0 for v in r.residuals(exp_coeffs(N)))


@given(fracs, st.integers(1, 3), st.integers(1, 3))
def test_algebraic_to_ode_annihilates_branch(q, s, t):
    # (1 - (1-q) z)^s y^t = 1, branch y(0) = 1, i.e. y = (1 - (1-q) z)^(-s/t)
    base = BiPoly.from_terms({(0, 0): 1, (1, 0): -(1 - q)})
    g = AlgebraicFunction(base**s * BiPoly.y() ** t - 1, 1)
    ode = algebraic_to_ode(g)
    assert ode.order <= t
    ser = series_algebraic(g, N)
    assert annihilates(ode, ser.coeffs)
    assert list(ser.coeffs) == binom_series(F(s, t), q, N + 1)


def test_algebraic_to_ode_rational_function():
    # y = 1 / (1 - z): first-order equation (1 - z) y' - y = 0
    p = BiPoly.y() * BiPoly.from_terms({(0, 0): 1, (1, 0): -1}) - 1
    ode = algebraic_to_ode(p)
    assert ode == LinearODE([Poly([-1]), Poly([1, -1])])


def test_compose_exp_with_rational_inner():
    # h(z) = exp(z / (1 - z))
    g = BiPoly.y() * BiPoly.from_terms({(0, 0): 1, (1, 0): -1}) - BiPoly.z()
    ode = compose_algebraic(EXP, AlgebraicFunction(g, 0))
    inner = [F(0)] + [F(1)] * (N - 1)
    # exp(u) with u = z + z^2 + ... computed directly as sum u^k / k!
    h, power = [F(0)] * N, [F(1)] + [F(0)] * (N - 1)
    for k in range(N):
        for i in range(N):
            h[i] += power[i] / factorial(k)
        power = [sum(power[j] * inner[i - j] for j in range(i + 1)) for i in range(N)]
    assert ode.order == 1
    assert annihilates(ode, h)


def test_compose_negbin_pgf_with_geometric():
    # negbin(1, 1/2) pgf in x, x = geometric pgf z/2 / (1 - z/2); composition is rational
    outer = LinearODE([Poly([-F(1, 2)]), Poly([1, -F(1, 2)])])  # (1 - x/2) f' - f/2 = 0
    g = BiPoly.from_terms({(0, 1): 1, (1, 1): -F(1, 2), (1, 0): -F(1, 2)})
    ode = compose_algebraic(outer, AlgebraicFunction(g, 0))
    # closed form: (1/2) / (1 - (1/2) x) with x = (z/2)/(1 - z/2) gives (1 - z/2) / (2 - 3z/2)
    num = [F(1), -F(1, 2)]
    den_inv = [F(3, 4) ** k / 2 for k in range(N)]
    h = [sum(num[j] * den_inv[i - j] for j in range(min(i, 1) + 1)) for i in range(N)]
    assert annihilates(ode, h)


def test_ode_product_and_sum():
    e = exp_coeffs(N)
    c = cos_coeffs(N)
    prod = [sum(e[j] * c[i - j] for j in range(i + 1)) for i in range(N)]
    total = [x + y for x, y in zip(e, c)]
    p = ode_product(EXP, COS)
    s = ode_sum(EXP, COS)
    assert p.order == 2 and s.order == 3
    assert annihilates(p, prod)
    assert annihilates(s, total)


def test_ode_sum_with_itself_is_minimal():
    assert ode_sum(EXP, EXP) == EXP


@given(st.integers(-3, 3).filter(bool), st.integers(-3, 3).filter(bool))
def test_product_of_exponentials(a, b):
    ea = LinearODE([Poly([-a]), Poly([1])])
    eb = LinearODE([Poly([-b]), Poly([1])])
    assert ode_product(ea, eb) == LinearODE([Poly([-(a + b)]), Poly([1])])


def test_round_trip_recurrence_ode_recurrence():
    # a_n = C(2n, n): (n+1) a_{n+1} = 2 (2n + 1) a_n
    r = PRecurrence([Poly([-2, -4]), Poly([1, 1])])
    a = [F(comb(2 * n, n)) for n in range(N)]
    assert all(v == 0 for v in r.residuals(a))
    ode = recurrence_to_ode(r)
    assert ode.is_homogeneous()
    assert annihilates(ode, a)
    assert all(v == 0 for v in ode_to_recurrence(ode).residuals(a))


def test_inhomogeneous_translation():
    r = PRecurrence([Poly([-2, -4]), Poly([1, 1])])
    a = [F(comb(2 * n, n)) for n in range(N)]
    ode = recurrence_to_inhomogeneous_ode(r, a[: r.order])
    assert annihilates(ode, a)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_recurrence_to_ode_annihilates_all_solutions(tail):
    # tail(n) a_n + (n + 1) a_{n+1} = 0
    r = PRecurrence([Poly(tail), Poly([1, 1])])
    a = [F(1)]
    for n in range(N - 1):
        a.append(-Poly(tail)(F(n)) * a[-1] / (n + 1))
    assert annihilates(recurrence_to_ode(r), a)


def test_ode_json_round_trip():
    ode = compose_algebraic(EXP, AlgebraicFunction(BiPoly.y() ** 2 - BiPoly.from_terms({(0, 0): 1, (1, 0): -1}), 1))
    assert LinearODE.from_json(ode.to_json()) == ode
    r = ode_to_recurrence(ode)
    assert PRecurrence.from_json(r.to_json()) == r
    with pytest.raises(ValueError):
        LinearODE.from_json({**ode.to_json(), "order": ode.order + 1})


def test_indicial_polynomial_regular_and_ordinary():
    # hypergeometric equation z(1-z) f'' + (c - (a+b+1) z) f' - ab f = 0, with a=1/2, b=1, c=1/3
    a, b, c = F(1, 2), F(1), F(1, 3)
    ode = LinearODE([Poly([-a * b]), Poly([c, -(a + b + 1)]), Poly([0, 1, -1])])
    at0 = indicial_polynomial(ode, 0)
    assert at0.classification == "regular-singular"
    assert at0.root_set() == {F(0), 1 - c}
    at1 = indicial_polynomial(ode, 1)
    assert at1.root_set() == {F(0), c - a - b}
    assert indicial_polynomial(ode, F(1, 2)).classification == "ordinary"


def test_indicial_irregular():
    # z^2 f' - f = 0 (exp(-1/z)) has an irregular singularity at 0
    ode = LinearODE([Poly([-1]), Poly([0, 0, 1])])
    assert indicial_polynomial(ode, 0).classification == "irregular-singular"


def test_example1_pgf_ode_singularities(example1):
    ode = build_pgf_ode(example1)
    roots = dict(rational_roots(ode.leading))
    assert roots[F(23, 16)] == 1
    assert roots[F(3, 2)] == 3
    assert min(r for r in roots if r != 0) == F(23, 16)


def test_taylor_from_ode_matches_closed_form():
    s = taylor_from_ode(COS, 0, [1, 0], N)
    assert list(s.coeffs) == cos_coeffs(N + 1)
    # expansion of exp about z = 2 with f(2) = 1
    s2 = taylor_from_ode(EXP, 2, [1], 10)
    assert list(s2.coeffs) == exp_coeffs(11)
    with pytest.raises(ValueError):
        taylor_from_ode(LinearODE([Poly([-1]), Poly([0, 1])]), 0, [1], 5)
