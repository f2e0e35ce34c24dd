"""Closure operations of D-finite functions.

Every operation follows the same scheme: represent successive derivatives of
the target function as coordinate vectors over Q(z) in a finite-dimensional
space, and return the first linear dependency among them. Trying orders
0, 1, 2, ... in turn means the first relation found is minimal for the chosen
ansatz space.
"""

from __future__ import annotations

from typing import Callable, Sequence

from ..algebra import BiPoly, EmptyNullspaceError, Poly, RatFun, nullspace_ratfun, solve_ratfun
from .operators import AlgebraicFunction, DerivationError, LinearODE

Vec = list  # list[RatFun]


class QuotientRing:
    """Q(z)[y] / (P(z, y)); elements are coordinate lists in the basis 1, y, ..., y^(D-1)."""

    def __init__(self, p: BiPoly):
        self.p = p
        self.dim = p.deg_y
        lead = RatFun(p.y_coeffs[-1])
        # y^D = -sum_j (P_j / P_D) y^j
        self._red = [RatFun(c) / lead for c in p.y_coeffs[:-1]]
        self._yprime = None

    def zero(self) -> Vec:
        return [RatFun.zero() for _ in range(self.dim)]

    def const(self, c) -> Vec:
        v = self.zero()
        v[0] = c if isinstance(c, RatFun) else RatFun(c)
        return v

    def reduce(self, a: Sequence[RatFun]) -> Vec:
        a = list(a)
        D = self.dim
        for k in range(len(a) - 1, D - 1, -1):
            c = a[k]
            if c:
                for j, r in enumerate(self._red):
                    if r:
                        a[k - D + j] = a[k - D + j] - c * r
        a = a[:D]
        while len(a) < D:
            a.append(RatFun.zero())
        return a

    def gen(self) -> Vec:
        return self.reduce([RatFun.zero(), RatFun.one()])

    def add(self, a: Vec, b: Vec) -> Vec:
        return [x + y for x, y in zip(a, b)]

    def scale(self, a: Vec, c: RatFun) -> Vec:
        return [x * c if x else x for x in a]

    def mul(self, a: Vec, b: Vec) -> Vec:
        out = [RatFun.zero() for _ in range(2 * self.dim - 1)]
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return self.reduce(out)

    def from_y_poly(self, coeffs: Sequence) -> Vec:
        """Element for sum_j coeffs[j](z) y^j; coeffs are RatFun/Poly/rationals."""
        return self.reduce([c if isinstance(c, RatFun) else RatFun(c) for c in coeffs] or [RatFun.zero()])

    def poly_at_gen(self, q: Poly) -> Vec:
        """q(y) for a polynomial q with rational coefficients."""
        return self.from_y_poly(list(q.coeffs))

    def inverse(self, a: Vec) -> Vec:
        D = self.dim
        cols = []
        basis_pow = self.const(1)
        y = self.gen()
        for _ in range(D):
            cols.append(self.mul(a, basis_pow))
            basis_pow = self.mul(basis_pow, y)
        M = [[cols[j][i] for j in range(D)] for i in range(D)]
        rhs = [RatFun.one()] + [RatFun.zero()] * (D - 1)
        try:
            return solve_ratfun(M, rhs)
        except ArithmeticError as exc:
            raise DerivationError("element not invertible modulo P (is P squarefree in y?)") from exc

    def yprime(self) -> Vec:
        """dy/dz = -P_z / P_y reduced modulo P."""
        if self._yprime is None:
            pz = self.from_y_poly(list(self.p.diff_z().y_coeffs))
            py = self.from_y_poly(list(self.p.diff_y().y_coeffs))
            self._yprime = [-x for x in self.mul(pz, self.inverse(py))]
        return self._yprime

    def derivative(self, a: Vec) -> Vec:
        out = [x.derivative() for x in a]
        # d/dz of y^j contributes j y^(j-1) y'
        dy = [RatFun.zero() for _ in range(self.dim)]
        for j in range(1, self.dim):
            if a[j]:
                dy[j - 1] = a[j] * j
        if any(dy):
            out = self.add(out, self.mul(dy, self.yprime()))
        return out


def find_relation(start: Vec, derive: Callable[[Vec], Vec], max_order: int) -> list[Poly]:
    """Smallest k and polynomials c_0..c_k with sum_i c_i derive^i(start) = 0."""
    vecs = [start]
    for _ in range(max_order + 1):
        k = len(vecs)
        M = [[vecs[j][i] for j in range(k)] for i in range(len(start))]
        try:
            basis = nullspace_ratfun(M, clear=True)
        except EmptyNullspaceError:
            vecs.append(derive(vecs[-1]))
            continue
        return basis[0]
    raise DerivationError(f"no relation found up to order {max_order}")


def _check_order(ode: LinearODE, bound: int, what: str) -> LinearODE:
    if ode.order > bound:
        raise DerivationError(f"{what}: order {ode.order} exceeds bound {bound}")
    return ode


def _equation(g) -> BiPoly:
    return g.p if isinstance(g, AlgebraicFunction) else g


def algebraic_to_ode(g: AlgebraicFunction | BiPoly) -> LinearODE:
    """Homogeneous linear ODE annihilating every branch of P(z, y) = 0."""
    ring = QuotientRing(_equation(g))
    rel = find_relation(ring.gen(), ring.derivative, ring.dim)
    return _check_order(LinearODE(rel), ring.dim, "algebraic_to_ode")


def compose_algebraic(f_ode: LinearODE, g: AlgebraicFunction | BiPoly) -> LinearODE:
    """ODE for h(z) = f(g(z)) given an ODE for f and the algebraic function g.

    Only the defining equation of g matters: the result annihilates f(g)
    for every branch of g and every solution f.
    """
    if not f_ode.is_homogeneous():
        raise ValueError("compose_algebraic needs a homogeneous ODE")
    ring = QuotientRing(_equation(g))
    d, D = f_ode.order, ring.dim
    gp = ring.yprime()
    inv_lead = ring.inverse(ring.poly_at_gen(f_ode.leading))
    # f^(d)(g) = sum_k red[k] f^(k)(g)
    red = [[-x for x in ring.mul(ring.poly_at_gen(q), inv_lead)] for q in f_ode.coeffs[:-1]]

    def split(v: Vec) -> list[Vec]:
        return [v[i * D:(i + 1) * D] for i in range(d)]

    def derive(v: Vec) -> Vec:
        parts = split(v)
        out = [ring.derivative(c) for c in parts]
        for i, c in enumerate(parts):
            if not any(c):
                continue
            cg = ring.mul(c, gp)
            if i + 1 < d:
                out[i + 1] = ring.add(out[i + 1], cg)
            else:
                for k in range(d):
                    out[k] = ring.add(out[k], ring.mul(cg, red[k]))
        return [x for part in out for x in part]

    start = [RatFun.zero() for _ in range(d * D)]
    start[0] = RatFun.one()
    rel = find_relation(start, derive, d * D)
    return _check_order(LinearODE(rel), d * D, "compose_algebraic")


def _reduction(ode: LinearODE) -> list[RatFun]:
    lead = RatFun(ode.leading)
    return [-(RatFun(q) / lead) for q in ode.coeffs[:-1]]


def ode_product(e1: LinearODE, e2: LinearODE) -> LinearODE:
    """ODE satisfied by every product of a solution of e1 and a solution of e2."""
    if not (e1.is_homogeneous() and e2.is_homogeneous()):
        raise ValueError("ode_product needs homogeneous ODEs")
    d1, d2 = e1.order, e2.order
    r1, r2 = _reduction(e1), _reduction(e2)

    def derive(v: Vec) -> Vec:
        out = [c.derivative() for c in v]
        for i in range(d1):
            for j in range(d2):
                c = v[i * d2 + j]
                if not c:
                    continue
                # (f^(i) g^(j))' = f^(i+1) g^(j) + f^(i) g^(j+1)
                if i + 1 < d1:
                    out[(i + 1) * d2 + j] = out[(i + 1) * d2 + j] + c
                else:
                    for k in range(d1):
                        if r1[k]:
                            out[k * d2 + j] = out[k * d2 + j] + c * r1[k]
                if j + 1 < d2:
                    out[i * d2 + j + 1] = out[i * d2 + j + 1] + c
                else:
                    for k in range(d2):
                        if r2[k]:
                            out[i * d2 + k] = out[i * d2 + k] + c * r2[k]
        return out

    start = [RatFun.zero() for _ in range(d1 * d2)]
    start[0] = RatFun.one()
    rel = find_relation(start, derive, d1 * d2)
    return _check_order(LinearODE(rel), d1 * d2, "ode_product")


def ode_sum(e1: LinearODE, e2: LinearODE) -> LinearODE:
    """ODE satisfied by every sum of a solution of e1 and a solution of e2."""
    if not (e1.is_homogeneous() and e2.is_homogeneous()):
        raise ValueError("ode_sum needs homogeneous ODEs")
    d1, d2 = e1.order, e2.order
    r1, r2 = _reduction(e1), _reduction(e2)

    def derive_block(v: Vec, r: list[RatFun]) -> Vec:
        d = len(r)
        out = [c.derivative() for c in v]
        for i, c in enumerate(v):
            if not c:
                continue
            if i + 1 < d:
                out[i + 1] = out[i + 1] + c
            else:
                for k in range(d):
                    if r[k]:
                        out[k] = out[k] + c * r[k]
        return out

    def derive(v: Vec) -> Vec:
        return derive_block(v[:d1], r1) + derive_block(v[d1:], r2)

    start = [RatFun.zero() for _ in range(d1 + d2)]
    start[0] = RatFun.one()
    start[d1] = RatFun.one()
    rel = find_relation(start, derive, d1 + d2)
    return _check_order(LinearODE(rel), d1 + d2, "ode_sum")
