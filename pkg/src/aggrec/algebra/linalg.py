"""Exact linear algebra over Q(z).

Matrices are lists of rows; entries may be ``RatFun``, ``Poly`` or rationals.
Elimination runs fraction-free over Q[z] after clearing row denominators,
with polynomial content stripped from each row after every update.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import Poly, common_content, exact_div, poly_gcd, poly_lcm
from .ratfun import RatFun


class EmptyNullspaceError(ValueError):
    """The matrix has full column rank: no linear dependency exists."""


def _to_ratfun(x) -> RatFun:
    return x if isinstance(x, RatFun) else RatFun(x)


def _primitive_row(row: list[Poly]) -> list[Poly]:
    g = None
    for p in row:
        if p:
            g = p.monic() if g is None else poly_gcd(g, p)
            if g.degree == 0:
                break
    if g is None:
        return row
    if g.degree > 0:
        row = [exact_div(p, g) if p else p for p in row]
    c = common_content(row)
    if c != 1:
        row = [p / c for p in row]
    return row


def _clear_row(row: Sequence) -> list[Poly]:
    rs = [_to_ratfun(x) for x in row]
    den = Poly([1])
    for r in rs:
        if r.den.degree > 0:
            den = poly_lcm(den, r.den)
    out = []
    for r in rs:
        if r.is_zero():
            out.append(Poly())
        elif r.den == den:
            out.append(r.num)
        else:
            out.append(r.num * exact_div(den, r.den))
    return _primitive_row(out)


def row_reduce(M: Sequence[Sequence]) -> tuple[list[list[Poly]], list[int]]:
    """Fraction-free reduced echelon form over Q[z]; returns (rows, pivot columns)."""
    rows = [_clear_row(r) for r in M]
    rows = [r for r in rows if any(r)]
    ncols = len(M[0]) if M else 0
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        best = None
        for i in range(prow, len(rows)):
            e = rows[i][col]
            if e and (best is None or e.degree < rows[best][col].degree
                      or (e.degree == rows[best][col].degree and len(rows[i]) < len(rows[best]))):
                best = i
        if best is None:
            continue
        rows[prow], rows[best] = rows[best], rows[prow]
        piv = rows[prow]
        pv = piv[col]
        for i in range(len(rows)):
            if i == prow:
                continue
            e = rows[i][col]
            if not e:
                continue
            g = poly_gcd(pv, e)
            a = exact_div(pv, g)
            b = exact_div(e, g)
            rows[i] = _primitive_row([a * x - b * y for x, y in zip(rows[i], piv)])
        pivots.append(col)
        prow += 1
        rows = rows[:prow] + [r for r in rows[prow:] if any(r)]
        if prow == len(rows):
            break
    return rows[:prow], pivots


def clear_denominators(vec: Sequence[RatFun]) -> list[Poly]:
    """Scale a RatFun vector to a content-free Poly vector.

    The last nonzero entry gets a positive leading coefficient.
    """
    polys = _clear_row(vec)
    for p in reversed(polys):
        if p:
            if p.lc < 0:
                polys = [-q for q in polys]
            break
    return polys


def nullspace_ratfun(M: Sequence[Sequence], clear: bool = False) -> list[list]:
    """Basis of {v : M v = 0} over Q(z) in reduced echelon form.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns. With ``clear=True`` the vectors are scaled to content-free
    polynomial vectors instead. Raises ``EmptyNullspaceError`` if the kernel
    is trivial.
    """
    if not M:
        raise ValueError("empty matrix")
    ncols = len(M[0])
    rows, pivots = row_reduce(M)
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        raise EmptyNullspaceError("no linear dependency among the columns")
    basis = []
    for f in free:
        v = [RatFun.zero() for _ in range(ncols)]
        v[f] = RatFun.one()
        for r, pc in zip(rows, pivots):
            if r[f]:
                v[pc] = -RatFun(r[f], r[pc])
        basis.append(clear_denominators(v) if clear else v)
    return basis


def solve_ratfun(M: Sequence[Sequence], b: Sequence) -> list[RatFun]:
    """Unique solution of M v = b over Q(z); raises if singular."""
    n = len(M[0])
    aug = [list(row) + [-_to_ratfun(bi)] for row, bi in zip(M, b)]
    rows, pivots = row_reduce(aug)
    if len(pivots) != n or n in pivots:
        raise ArithmeticError("linear system is singular or inconsistent")
    v = [RatFun.zero() for _ in range(n)]
    for r, pc in zip(rows, pivots):
        v[pc] = -RatFun(r[n], r[pc])
    return v


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list[RatFun]:
    out = []
    for row in M:
        acc = RatFun.zero()
        for a, x in zip(row, v):
            a = _to_ratfun(a)
            x = _to_ratfun(x)
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out
