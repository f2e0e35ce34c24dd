"""Exact rational roots and certified-ish numeric complex roots of polynomials."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import mpmath

from .poly import Poly, exact_div, poly_divrem, squarefree_part


def mpf_to_fraction(x) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    man = int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def _multiplicity(a: Poly, r: Fraction) -> int:
    lin = Poly([-r, 1])
    m = 0
    while a.degree >= 1:
        q, rem = poly_divrem(a, lin)
        if rem:
            break
        a = q
        m += 1
    return m


def _small_divisors(n: int, limit: int = 10**5) -> list[int] | None:
    n = abs(n)
    if n == 0:
        return [0]
    if n > limit * limit:
        return None
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(a: Poly) -> list[tuple[Fraction, int]]:
    """All rational roots of ``a`` with multiplicities, sorted ascending.

    Candidates p/q (p | constant term, q | leading coefficient of the
    primitive squarefree part) are enumerated directly when the coefficients
    are small enough to factor; otherwise each real root is isolated
    numerically and recovered with a bounded-denominator rational
    approximation, then confirmed by exact evaluation.
    """
    if a.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    found: dict[Fraction, int] = {}
    v = a.valuation()
    if v > 0:
        found[Fraction(0)] = v
        a = Poly(a.coeffs[v:])
    if a.degree < 1:
        return sorted(found.items())
    sf = squarefree_part(a).primitive()
    lead = int(sf.lc)
    const = int(sf.coeffs[0])
    cands: set[Fraction] = set()
    dl, dc = _small_divisors(lead), _small_divisors(const)
    if dl is not None and dc is not None and len(dl) * len(dc) <= 200000:
        for p in dc:
            for q in dl:
                if gcd(p, q) == 1:
                    cands.add(Fraction(p, q))
                    cands.add(Fraction(-p, q))
    else:
        digits = 2 * len(str(abs(lead))) + 30
        with mpmath.workdps(digits):
            roots = mpmath.polyroots([int(c) for c in reversed(sf.coeffs)],
                                     maxsteps=200, extraprec=4 * digits)
            for z in roots:
                if abs(mpmath.im(z)) < mpmath.mpf(10) ** (-digits // 3):
                    cands.add(mpf_to_fraction(mpmath.re(z)).limit_denominator(abs(lead)))
    for r in cands:
        if sf(r) == 0:
            found[r] = _multiplicity(a, r)
    return sorted(found.items())


def complex_roots_numeric(a: Poly, digits: int = 30):
    """All complex roots of ``a`` as (value, error bound) pairs.

    Roots of repeated factors are computed on the squarefree part, so a root of
    multiplicity m appears once. Raises ``ArithmeticError`` if the iteration
    does not converge at the requested precision.
    """
    if a.is_zero():
        raise ValueError("complex_roots_numeric of the zero polynomial")
    if digits < 10:
        raise ValueError("digits must be at least 10")
    sf = squarefree_part(a)
    if sf.degree < 1:
        return []
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(sf.coeffs)]
    with mpmath.workdps(digits + 10):
        try:
            roots, err = mpmath.polyroots(coeffs, maxsteps=50 + 10 * sf.degree,
                                          extraprec=2 * digits + 20, error=True)
        except mpmath.libmp.NoConvergence as exc:
            raise ArithmeticError(f"root finding did not converge at {digits} digits") from exc
    if not isinstance(roots, list):
        roots = [roots]
    tol = mpmath.mpf(10) ** (-digits)
    if err > tol:
        raise ArithmeticError(f"root error {mpmath.nstr(err, 5)} exceeds 1e-{digits}; raise digits")
    return [(mpmath.mpc(r), err) for r in roots]


def minimal_modulus_roots(a: Poly, digits: int = 30, exclude_zero: bool = True):
    """Roots of minimal modulus (numeric), optionally ignoring z = 0."""
    roots = complex_roots_numeric(a, digits)
    if exclude_zero:
        roots = [(r, e) for r, e in roots if abs(r) > mpmath.mpf(10) ** (-digits // 2)]
    if not roots:
        return [], None
    mod = min(abs(r) for r, _ in roots)
    tol = mpmath.mpf(10) ** (-(digits // 2))
    return [(r, e) for r, e in roots if abs(r) - mod < tol], mod
