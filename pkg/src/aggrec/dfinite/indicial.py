"""Indicial polynomials and singular-point classification."""

from __future__ import annotations

from fractions import Fraction

import mpmath

from ..algebra import Poly, as_fraction, complex_roots_numeric, exact_div, rational_roots
from ..algebra.poly import poly_divrem
from .operators import IndicialData, LinearODE


def falling_factorial_poly(k: int) -> Poly:
    """w (w - 1) ... (w - k + 1)."""
    p = Poly([1])
    for t in range(k):
        p = p * Poly([-t, 1])
    return p


def _split_roots(ind: Poly, digits: int = 30):
    exact = rational_roots(ind)
    rest = ind
    for r, m in exact:
        for _ in range(m):
            rest = exact_div(rest, Poly([-r, 1]))
    numeric = [v for v, _ in complex_roots_numeric(rest, digits)] if rest.degree >= 1 else []
    return exact, numeric


def indicial_polynomial(e: LinearODE, point) -> IndicialData:
    """Indicial polynomial of ``e`` at a rational point.

    Substituting (z - rho)^w * sum A_k (z - rho)^k, the term Q_k D^k f
    contributes at power w + ord_rho(Q_k) - k with coefficient
    lc_rho(Q_k) * w(w-1)...(w-k+1); the indicial polynomial collects the
    terms of lowest power.
    """
    rho = as_fraction(point)
    lows = []
    for k, q in enumerate(e.coeffs):
        if q:
            sh = q.shift(rho)
            m = sh.valuation()
            lows.append((m - k, k, sh.coeffs[m]))
    mu = min(x[0] for x in lows)
    ind = Poly()
    for power, k, c in lows:
        if power == mu:
            ind = ind + falling_factorial_poly(k) * c
    if e.leading(rho) != 0:
        cls = "ordinary"
    elif ind.degree == e.order:
        cls = "regular-singular"
    else:
        cls = "irregular-singular"
    ind = ind.primitive()
    exact, numeric = _split_roots(ind)
    return IndicialData(singularity=rho, indicial=ind, roots=exact, numeric_roots=numeric,
                        classification=cls, lowest_power=mu)


def _multiplicity_of_factor(q: Poly, h: Poly) -> tuple[int, Poly]:
    m = 0
    while q.degree >= h.degree:
        quo, rem = poly_divrem(q, h)
        if rem:
            break
        q, m = quo, m + 1
    return m, q


def indicial_polynomial_numeric(e: LinearODE, factor: Poly, point, digits: int = 30) -> IndicialData:
    """Indicial data at an irrational root ``point`` of the squarefree ``factor``.

    Orders of vanishing are exact (multiplicity of ``factor``); the leading
    local coefficients h'(rho)^m * r(rho) are evaluated numerically.
    """
    with mpmath.workdps(digits + 10):
        rho = mpmath.mpmathify(point)
        hprime = factor.derivative().eval_with(rho, _to_mpf)
        lows = []
        for k, q in enumerate(e.coeffs):
            if q:
                m, rest = _multiplicity_of_factor(q, factor)
                lows.append((m - k, k, hprime**m * rest.eval_with(rho, _to_mpf)))
        mu = min(x[0] for x in lows)
        coeffs = [mpmath.mpc(0)] * (e.order + 1)
        for power, k, c in lows:
            if power == mu:
                ff = falling_factorial_poly(k)
                for i, a in enumerate(ff.coeffs):
                    coeffs[i] += c * _to_mpf(a)
        while len(coeffs) > 1 and abs(coeffs[-1]) == 0:
            coeffs.pop()
        deg = len(coeffs) - 1
        roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=digits) if deg else []
    m_lead, _ = _multiplicity_of_factor(e.leading, factor)
    if m_lead == 0:
        cls = "ordinary"
    elif deg == e.order:
        cls = "regular-singular"
    else:
        cls = "irregular-singular"
    return IndicialData(singularity=rho, indicial=Poly(), roots=[], numeric_roots=list(roots),
                        classification=cls, lowest_power=mu)


def _to_mpf(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpmathify(c)
