"""Translation between linear ODEs and recurrences for Taylor coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import comb

from ..algebra import EmptyNullspaceError, Poly, RatFun, nullspace_ratfun
from .operators import DerivationError, LinearODE, PRecurrence


def _rising_shifted(offset: int, k: int) -> Poly:
    """(n + offset + 1)(n + offset + 2)...(n + offset + k) as a polynomial in n."""
    p = Poly([1])
    for t in range(1, k + 1):
        p = p * Poly([offset + t, 1])
    return p


def ode_to_recurrence(e: LinearODE) -> PRecurrence:
    """Recurrence for the Taylor coefficients at 0 of any power-series solution.

    [z^n] z^m f^(k)(z) = (n-m+1)...(n-m+k) a_{n+k-m}; the resulting relation
    holds for every integer n when a_j = 0 for j < 0.
    """
    if not e.is_homogeneous():
        raise ValueError("ode_to_recurrence needs a homogeneous ODE")
    by_shift: dict[int, Poly] = {}
    for k, q in enumerate(e.coeffs):
        for m, c in enumerate(q.coeffs):
            if c:
                s = k - m
                by_shift[s] = by_shift.get(s, Poly()) + _rising_shifted(-m, k) * c
    by_shift = {s: p for s, p in by_shift.items() if p}
    if not by_shift:
        raise DerivationError("ODE yields an empty recurrence")
    lo, hi = min(by_shift), max(by_shift)
    # re-index n -> n - lo so the lowest shift becomes a_n
    coeffs = [by_shift.get(s, Poly()).shift(-lo) for s in range(lo, hi + 1)]
    return PRecurrence(coeffs)


def _stirling2_table(n: int) -> list[list[int]]:
    S = [[0] * (n + 1) for _ in range(n + 1)]
    S[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            S[i][j] = j * S[i - 1][j] + S[i - 1][j - 1]
    return S


def _theta_form(r: PRecurrence) -> list[Poly]:
    """Coefficients (of D^j) of sum_k z^(e-k) R_k(theta - k), theta = z d/dz."""
    e = r.order
    deg = max(p.degree for p in r.coeffs)
    S = _stirling2_table(max(deg, 0))
    out = [Poly() for _ in range(deg + 1)]
    for k, R in enumerate(r.coeffs):
        shifted = R.shift(-k)
        for i, c in enumerate(shifted.coeffs):
            if not c:
                continue
            for j in range(i + 1):
                if S[i][j]:
                    out[j] = out[j] + Poly.monomial(e - k + j, c * S[i][j])
    return out


def _boundary_polys(r: PRecurrence) -> list[Poly]:
    """Right-hand sides contributed by a_0, ..., a_{e-1} (one per initial index)."""
    e = r.order
    polys = []
    for m in range(e):
        p = Poly()
        for k in range(m + 1, e + 1):
            v = r.coeffs[k](Fraction(m - k))
            if v:
                p = p + Poly.monomial(e - k + m, v)
        polys.append(p)
    return polys


def compose_operators(left: list[Poly], right: list[Poly]) -> list[Poly]:
    """Coefficients of (sum_j left_j D^j) o (sum_k right_k D^k)."""
    out = [Poly() for _ in range(len(left) + len(right) - 1)]
    for j, c in enumerate(left):
        if not c:
            continue
        for k, q in enumerate(right):
            dq = q
            for i in range(j + 1):
                if dq:
                    out[k + j - i] = out[k + j - i] + c * dq * comb(j, i)
                dq = dq.derivative()
    return out


def _independent_polys(polys: list[Poly]) -> list[Poly]:
    """A basis over Q of the span of ``polys`` (Gaussian elimination on coefficients)."""
    width = max((p.degree + 1 for p in polys if p), default=0)
    rows = [[p[i] for i in range(width)] for p in polys if p]
    basis = []
    col = 0
    while rows and col < width:
        piv = next((r for r in rows if r[col]), None)
        if piv is None:
            col += 1
            continue
        rows.remove(piv)
        basis.append(Poly(piv))
        rows = [[x - r[col] / piv[col] * y for x, y in zip(r, piv)] for r in rows]
        rows = [r for r in rows if any(r)]
        col += 1
    return basis


def annihilator_of_polys(polys: list[Poly]) -> list[Poly]:
    """Minimal-order operator with polynomial coefficients killing every p in ``polys``."""
    basis = _independent_polys(polys)
    s = len(basis)
    if s == 0:
        return [Poly([1])]
    M = []
    for b in basis:
        derivs, d = [], b
        for _ in range(s + 1):
            derivs.append(RatFun(d))
            d = d.derivative()
        M.append(derivs)
    try:
        return nullspace_ratfun(M, clear=True)[0]
    except EmptyNullspaceError as exc:
        raise DerivationError("could not annihilate boundary polynomials") from exc


def recurrence_to_ode(r: PRecurrence) -> LinearODE:
    """Homogeneous ODE annihilating the generating function of every solution of ``r``.

    The direct translation sum_k z^(e-k) R_k(theta - k) f = b(z) carries a
    polynomial right-hand side b determined by a_0..a_{e-1}; it is removed by
    left-composing with the minimal annihilator of the span of all possible b.
    """
    theta = _theta_form(r)
    boundary = _boundary_polys(r)
    ann = annihilator_of_polys(boundary)
    return LinearODE(compose_operators(ann, theta))


def recurrence_to_inhomogeneous_ode(r: PRecurrence, initial) -> LinearODE:
    """The direct translation with the right-hand side fixed by ``initial`` values."""
    theta = _theta_form(r)
    rhs = Poly()
    for m, p in enumerate(_boundary_polys(r)):
        rhs = rhs + p * Fraction(initial[m])
    return LinearODE(theta, rhs if rhs else None)
