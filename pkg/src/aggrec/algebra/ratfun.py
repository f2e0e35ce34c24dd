"""Rational functions num/den over Q in normal form (coprime, monic den)."""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, exact_div, poly_gcd


class RatFun:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _normalized: bool = False):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if den is None:
            den = Poly([1])
        elif not isinstance(den, Poly):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            if num.is_zero():
                den = Poly([1])
            elif den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = exact_div(num, g)
                    den = exact_div(den, g)
            lc = den.lc
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den

    @classmethod
    def zero(cls) -> "RatFun":
        return cls(Poly(), Poly([1]), _normalized=True)

    @classmethod
    def one(cls) -> "RatFun":
        return cls(Poly([1]), Poly([1]), _normalized=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFun):
            if isinstance(other, (Poly, int, Fraction)):
                other = RatFun(other)
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, (Poly, int, Fraction)):
            return RatFun(other)
        return None

    def __add__(self, other) -> "RatFun":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree == 0:
            return RatFun(self.num * other.den + other.num * self.den, self.den * other.den,
                          _normalized=True)
        b1 = exact_div(self.den, g)
        d1 = exact_div(other.den, g)
        return RatFun(self.num * d1 + other.num * b1, b1 * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den, _normalized=True)

    def __sub__(self, other) -> "RatFun":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFun":
        return (-self) + other

    def __mul__(self, other) -> "RatFun":
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFun.zero()
            return RatFun(self.num * other, self.den, _normalized=True)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatFun.zero()
        # cross-cancel before multiplying to keep degrees small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = self.num, other.den
        if g1.degree > 0:
            n1, d2 = exact_div(n1, g1), exact_div(d2, g1)
        n2, d1 = other.num, self.den
        if g2.degree > 0:
            n2, d1 = exact_div(n2, g2), exact_div(d1, g2)
        den = d1 * d2
        num = n1 * n2
        lc = den.lc
        if lc != 1:
            num, den = num / lc, den / lc
        return RatFun(num, den, _normalized=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other) -> "RatFun":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return RatFun(self.num / other, self.den, _normalized=True)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFun":
        return RatFun(other) * self.inverse()

    def derivative(self) -> "RatFun":
        n, d = self.num, self.den
        if d.degree == 0:
            return RatFun(n.derivative(), d, _normalized=True)
        return RatFun(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self) -> str:
        if self.is_poly():
            return f"RatFun({self.num})"
        return f"RatFun(({self.num})/({self.den}))"
