"""Operator types: linear ODEs, P-recurrences, algebraic functions, indicial data."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..algebra import BiPoly, Poly, RadicalNumber, as_fraction, poly_gcd
from ..algebra.poly import common_content, exact_div

FORMAT_VERSION = 1


class DerivationError(RuntimeError):
    """A closure or conversion step failed (should not happen for valid input)."""


def _normalize(polys: Sequence[Poly], rhs: Optional[Poly] = None, *, poly_content: bool):
    polys = list(polys)
    while polys and polys[-1].is_zero():
        polys.pop()
    if not polys:
        raise ValueError("operator with all coefficients zero")
    everything = polys + ([rhs] if rhs is not None else [])
    if poly_content:
        g = Poly()
        for p in everything:
            if p:
                g = p.monic() if g.is_zero() else poly_gcd(g, p)
                if g.degree == 0:
                    break
        if g.degree > 0:
            polys = [exact_div(p, g) for p in polys]
            rhs = exact_div(rhs, g) if rhs is not None else None
            everything = polys + ([rhs] if rhs is not None else [])
    c = common_content(everything)
    if polys[-1].lc < 0:
        c = -c
    polys = [p / c for p in polys]
    if rhs is not None:
        rhs = rhs / c
    return tuple(polys), rhs


def _operator_json(coeffs: Sequence[Poly], var: str) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "order": len(coeffs) - 1,
        "coeffs": [p.to_json() for p in coeffs],
        "var": var,
    }


class LinearODE:
    """sum_k coeffs[k](z) f^(k)(z) = rhs(z), canonical up to a rational factor.

    Common polynomial factors of the coefficients are divided out, the
    remaining integer coefficients are made coprime, and the leading
    coefficient of the top-order polynomial is positive.
    """

    __slots__ = ("coeffs", "rhs")

    def __init__(self, coeffs: Sequence, rhs: Optional[Poly] = None):
        polys = [c if isinstance(c, Poly) else Poly.const(c) for c in coeffs]
        if rhs is not None and rhs.is_zero():
            rhs = None
        self.coeffs, self.rhs = _normalize(polys, rhs, poly_content=True)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Poly:
        return self.coeffs[-1]

    def is_homogeneous(self) -> bool:
        return self.rhs is None

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearODE):
            return NotImplemented
        return self.coeffs == other.coeffs and self.rhs == other.rhs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.rhs))

    def apply_series(self, a: Sequence) -> list:
        """Coefficients of sum_k Q_k f^(k) for the truncated series ``a``.

        Only the first len(a) - order entries are reliable.
        """
        n = len(a)
        out = [0] * n
        for k, q in enumerate(self.coeffs):
            # coefficients of f^(k): (j+1)...(j+k) a_{j+k}
            deriv = []
            for j in range(n - k):
                f = 1
                for t in range(1, k + 1):
                    f *= j + t
                deriv.append(f * a[j + k])
            for m, c in enumerate(q.coeffs):
                if c:
                    for j, d in enumerate(deriv):
                        if j + m < n:
                            out[j + m] = out[j + m] + c * d
        if self.rhs is not None:
            for m, c in enumerate(self.rhs.coeffs):
                if m < n:
                    out[m] = out[m] - c
        return out[: max(n - self.order, 0)]

    def to_json(self) -> dict:
        data = _operator_json(self.coeffs, "z")
        if self.rhs is not None:
            data["rhs"] = self.rhs.to_json()
        return data

    @classmethod
    def from_json(cls, data: dict) -> "LinearODE":
        if data.get("var", "z") != "z":
            raise ValueError("differential operator must use variable z")
        rhs = Poly.from_json(data["rhs"]) if data.get("rhs") else None
        ode = cls([Poly.from_json(c) for c in data["coeffs"]], rhs)
        if "order" in data and data["order"] != ode.order:
            raise ValueError("declared order does not match coefficients")
        return ode

    def format(self) -> str:
        parts = []
        for k, q in enumerate(self.coeffs):
            if q:
                d = "f" if k == 0 else ("f'" if k == 1 else f"f^({k})")
                parts.append(f"({q.format('z')})*{d}")
        return " + ".join(parts) + f" = {self.rhs.format('z') if self.rhs else 0}"

    def __repr__(self) -> str:
        return f"LinearODE[{self.order}]({self.format()})"


class PRecurrence:
    """sum_k coeffs[k](n) a_{n+k} = 0 for every integer n >= 0 (a_j = 0 for j < 0).

    Only the rational content is removed: dividing out a common polynomial
    factor could invalidate the relation at that factor's integer roots.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        polys = [c if isinstance(c, Poly) else Poly.const(c) for c in coeffs]
        self.coeffs, _ = _normalize(polys, None, poly_content=False)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Poly:
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PRecurrence):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def residual(self, a: Sequence, n: int):
        acc = 0
        for k, r in enumerate(self.coeffs):
            acc = acc + r(Fraction(n)) * a[n + k]
        return acc

    def residuals(self, a: Sequence) -> list:
        return [self.residual(a, n) for n in range(len(a) - self.order)]

    def max_nonneg_integer_root(self) -> int:
        """Largest integer n >= 0 with leading(n) == 0, or -1."""
        from ..algebra import rational_roots

        roots = [r for r, _ in rational_roots(self.leading) if r.denominator == 1 and r >= 0]
        return int(max(roots)) if roots else -1

    def to_json(self) -> dict:
        return _operator_json(self.coeffs, "n")

    @classmethod
    def from_json(cls, data: dict) -> "PRecurrence":
        if data.get("var", "n") != "n":
            raise ValueError("recurrence must use variable n")
        rec = cls([Poly.from_json(c) for c in data["coeffs"]])
        if "order" in data and data["order"] != rec.order:
            raise ValueError("declared order does not match coefficients")
        return rec

    def format(self) -> str:
        parts = []
        for k, r in enumerate(self.coeffs):
            if r:
                idx = "n" if k == 0 else f"n+{k}"
                parts.append(f"({r.format('n')})*a[{idx}]")
        return " + ".join(parts) + " = 0"

    def __repr__(self) -> str:
        return f"PRecurrence[{self.order}]({self.format()})"


def operator_json_bytes(obj) -> bytes:
    return (json.dumps(obj.to_json(), sort_keys=True, separators=(",", ":")) + "\n").encode()


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, RadicalNumber))


class AlgebraicFunction:
    """The branch y(z) of P(z, y) = 0 with y(0) = y0, where y0 is a simple root.

    ``y0`` is exact (Fraction, or RadicalNumber for values like sqrt(p)) or a
    high-precision numeric approximation for nested radicals.
    """

    __slots__ = ("p", "y0")

    def __init__(self, p: BiPoly, y0):
        if p.deg_y < 1:
            raise ValueError("algebraic equation must involve y")
        if isinstance(y0, (int, str)):
            y0 = as_fraction(y0)
        self.p = p
        self.y0 = y0
        p0 = p.at_z(0)
        dp0 = p0.derivative()
        if _is_exact(y0):
            if p0(y0) != 0:
                raise ValueError(f"branch value is not a root of P(0, y): {y0!r}")
            if dp0(y0) == 0:
                raise ValueError("branch value is a multiple root of P(0, y)")
        else:
            import mpmath

            val = p0.eval_with(mpmath.mpmathify(y0), _mpf)
            scale = sum(abs(_mpf(c)) for c in p0.coeffs) * max(1, abs(y0)) ** p0.degree
            tol = mpmath.mpf(10) ** (-(mpmath.mp.dps // 2))
            if abs(val) > tol * scale:
                raise ValueError("numeric branch value is not a root of P(0, y)")
            dval = dp0.eval_with(mpmath.mpmathify(y0), _mpf)
            if abs(dval) <= tol * scale:
                raise ValueError("branch value is (numerically) a multiple root of P(0, y)")

    @property
    def deg_y(self) -> int:
        return self.p.deg_y

    def is_exact(self) -> bool:
        return _is_exact(self.y0)

    def __repr__(self) -> str:
        return f"AlgebraicFunction({self.p.format()} = 0, y0={self.y0!r})"


def _mpf(c):
    import mpmath

    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpmathify(c)


@dataclass
class IndicialData:
    """Local exponent data of an ODE at a point."""

    singularity: object
    indicial: Poly
    roots: list = field(default_factory=list)
    numeric_roots: list = field(default_factory=list)
    classification: str = "ordinary"
    lowest_power: int = 0

    def root_set(self) -> set:
        return {r for r, _ in self.roots}
