"""Bivariate polynomials P(z, y) stored as polynomials in y over Q[z]."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .poly import Poly, as_fraction, common_content, exact_div, format_fraction, poly_gcd


class BiPoly:
    """P(z, y) = sum_j y_coeffs[j](z) * y^j.

    Canonical storage strips zero leading y-coefficients. Degree zero in y is
    allowed for intermediate values; ``AlgebraicFunction`` enforces deg_y >= 1.
    """

    __slots__ = ("y_coeffs",)

    def __init__(self, y_coeffs: Iterable = ()):
        cs = [c if isinstance(c, Poly) else Poly.const(c) for c in y_coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.y_coeffs: tuple[Poly, ...] = tuple(cs)

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], object]) -> "BiPoly":
        """Build from {(z_power, y_power): coefficient}."""
        if not terms:
            return cls()
        dy = max(j for _, j in terms)
        rows: list[dict[int, Fraction]] = [dict() for _ in range(dy + 1)]
        for (i, j), c in terms.items():
            rows[j][i] = rows[j].get(i, Fraction(0)) + as_fraction(c)
        out = []
        for r in rows:
            dz = max(r) if r else -1
            out.append(Poly([r.get(i, 0) for i in range(dz + 1)]))
        return cls(out)

    @classmethod
    def const(cls, c) -> "BiPoly":
        return cls([Poly.const(c)])

    @classmethod
    def z(cls) -> "BiPoly":
        return cls([Poly.x()])

    @classmethod
    def y(cls) -> "BiPoly":
        return cls([Poly(), Poly([1])])

    @property
    def deg_y(self) -> int:
        return len(self.y_coeffs) - 1

    @property
    def deg_z(self) -> int:
        return max((c.degree for c in self.y_coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.y_coeffs

    def is_const(self) -> bool:
        return self.deg_y <= 0 and self.deg_z <= 0

    def __bool__(self) -> bool:
        return bool(self.y_coeffs)

    def coeff(self, j: int) -> Poly:
        return self.y_coeffs[j] if 0 <= j < len(self.y_coeffs) else Poly()

    def terms(self) -> dict[tuple[int, int], Fraction]:
        out = {}
        for j, p in enumerate(self.y_coeffs):
            for i, c in enumerate(p.coeffs):
                if c:
                    out[(i, j)] = c
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, BiPoly):
            return self.y_coeffs == other.y_coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.y_coeffs)

    @staticmethod
    def _coerce(other):
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, Poly):
            return BiPoly([other])
        if isinstance(other, (int, Fraction)):
            return BiPoly.const(other)
        return None

    def __add__(self, other) -> "BiPoly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.y_coeffs), len(o.y_coeffs))
        return BiPoly([self.coeff(j) + o.coeff(j) for j in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly([-c for c in self.y_coeffs])

    def __sub__(self, other) -> "BiPoly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "BiPoly":
        return (-self) + other

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            return BiPoly([c * other for c in self.y_coeffs])
        if isinstance(other, Poly):
            return BiPoly([c * other for c in self.y_coeffs])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return BiPoly()
        out = [Poly() for _ in range(len(self.y_coeffs) + len(o.y_coeffs) - 1)]
        for i, a in enumerate(self.y_coeffs):
            if a:
                for j, b in enumerate(o.y_coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return BiPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            return BiPoly([c / other for c in self.y_coeffs])
        return NotImplemented

    def __pow__(self, k: int) -> "BiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = BiPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, other: "BiPoly") -> "BiPoly":
        """Exact quotient; raises ArithmeticError if ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero bivariate polynomial")
        rem = list(self.y_coeffs)
        dy = other.deg_y
        lead = other.y_coeffs[-1]
        if len(rem) - 1 < dy:
            if any(rem):
                raise ArithmeticError("inexact bivariate division")
            return BiPoly()
        q = [Poly() for _ in range(len(rem) - dy)]
        for k in range(len(rem) - 1 - dy, -1, -1):
            c = rem[k + dy]
            if not c:
                continue
            qk = exact_div(c, lead)
            q[k] = qk
            for j, oc in enumerate(other.y_coeffs):
                rem[k + j] = rem[k + j] - qk * oc
        if any(r for r in rem):
            raise ArithmeticError("inexact bivariate division")
        return BiPoly(q)

    def diff_y(self) -> "BiPoly":
        return BiPoly([c * j for j, c in enumerate(self.y_coeffs)][1:])

    def diff_z(self) -> "BiPoly":
        return BiPoly([c.derivative() for c in self.y_coeffs])

    def at_z(self, z0) -> Poly:
        """Specialize z = z0 (exact) giving a polynomial in y."""
        return Poly([c(as_fraction(z0)) for c in self.y_coeffs])

    def __call__(self, z, y):
        acc = None
        for c in reversed(self.y_coeffs):
            cz = c(z)
            acc = cz if acc is None else acc * y + cz
        return 0 if acc is None else acc

    def swap(self) -> "BiPoly":
        """Exchange the roles of z and y."""
        return BiPoly.from_terms({(j, i): c for (i, j), c in self.terms().items()})

    def subs_y_poly(self, q: Poly) -> Poly:
        """P(z, q(z)) as a polynomial in z."""
        acc = Poly()
        for c in reversed(self.y_coeffs):
            acc = acc * q + c
        return acc

    def content_z(self) -> Poly:
        g = Poly()
        for c in self.y_coeffs:
            if c:
                g = c.monic() if g.is_zero() else poly_gcd(g, c)
        return g

    def canonical(self) -> "BiPoly":
        """Primitive integer form: polynomial content in z removed, powers of y
        dividing every term removed, rational content cleared, and the leading
        coefficient (in z) of the leading y-coefficient positive."""
        if self.is_zero():
            return self
        cs = list(self.y_coeffs)
        while cs and cs[0].is_zero():
            cs.pop(0)
        g = BiPoly(cs).content_z()
        if g.degree > 0:
            cs = [exact_div(c, g) for c in cs]
        c = common_content(cs)
        if cs[-1].lc < 0:
            c = -c
        return BiPoly([p / c for p in cs])

    def format(self) -> str:
        terms = self.terms()
        if not terms:
            return "0"
        parts = []
        for (i, j) in sorted(terms, key=lambda ij: (-ij[1], -ij[0])):
            c = terms[(i, j)]
            mono = []
            if i:
                mono.append("z" if i == 1 else f"z^{i}")
            if j:
                mono.append("y" if j == 1 else f"y^{j}")
            a = abs(c)
            if not mono:
                body = format_fraction(a)
            elif a == 1:
                body = "*".join(mono)
            else:
                body = "*".join([format_fraction(a)] + mono)
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self) -> str:
        return f"BiPoly({self.format()})"

    def to_json(self) -> list[list[str]]:
        return [c.to_json() for c in self.y_coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> "BiPoly":
        return cls(Poly.from_json(row) for row in data)


def _det_bareiss(M: list[list[BiPoly]]) -> BiPoly:
    n = len(M)
    if n == 0:
        return BiPoly.const(1)
    A = [list(r) for r in M]
    sign = 1
    prev = BiPoly.const(1)
    for k in range(n - 1):
        if A[k][k].is_zero():
            for i in range(k + 1, n):
                if not A[i][k].is_zero():
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return BiPoly()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]).exact_div(prev)
        prev = A[k][k]
    det = A[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant_compose(outer: BiPoly, inner: BiPoly) -> BiPoly:
    """Eliminate the middle variable x from outer(x, y) = 0 and inner(z, x) = 0.

    ``outer`` is stored with its first variable playing the role of x and
    ``inner`` with its y-slot playing x. The result R(z, y) vanishes on
    y = f(g(z)) whenever outer(x, f(x)) = 0 and inner(z, g(z)) = 0.
    """
    # outer as a polynomial in x with coefficients in Q[y]
    a_rows = outer.swap().y_coeffs  # index = power of x, Poly in y
    a = [_poly_in_y(row) for row in a_rows]
    # inner as a polynomial in x with coefficients in Q[z]
    b = [BiPoly([row]) for row in inner.y_coeffs]
    m, n = len(a) - 1, len(b) - 1
    if m < 1 or n < 1:
        raise ValueError("both equations must involve the eliminated variable")
    size = m + n
    zero = BiPoly()
    syl = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(a)):
            row[i + k] = c
        syl.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(b)):
            row[i + k] = c
        syl.append(row)
    return _det_bareiss(syl)


def _poly_in_y(p: Poly) -> BiPoly:
    return BiPoly([Poly.const(c) for c in p.coeffs])
