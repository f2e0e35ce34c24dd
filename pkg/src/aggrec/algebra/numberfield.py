"""Exact arithmetic in radical extensions Q(c^(1/t)) with c > 0 rational.

Used to carry irrational branch values such as sqrt(p) or q^(1/3) through
series expansions without rounding. The radicand is simplified so that
x^t - c is irreducible (by Capelli's criterion for positive c), which makes
the quotient ring a field.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

from .poly import Poly, as_fraction, poly_xgcd


def _iroot(n: int, d: int) -> int | None:
    """Exact integer d-th root of n >= 0, or None."""
    if n < 2:
        return n
    if n < 2**50:
        x = int(round(n ** (1.0 / d)))
    else:
        # integer Newton from an upper bound decreases monotonically to floor(root)
        x = 1 << (n.bit_length() // d + 1)
        while True:
            y = ((d - 1) * x + n // x ** (d - 1)) // d
            if y >= x:
                break
            x = y
    for cand in (x - 1, x, x + 1):
        if cand >= 0 and cand**d == n:
            return cand
    return None


def perfect_power_root(c: Fraction, d: int) -> Fraction | None:
    if c < 0:
        return None
    a, b = _iroot(c.numerator, d), _iroot(c.denominator, d)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def simplify_radical(c: Fraction, t: int) -> tuple[Fraction, int]:
    """Return (c', t') with c'^(1/t') = c^(1/t) and t' minimal."""
    c = as_fraction(c)
    if c <= 0 or t < 1:
        raise ValueError("radicand must be positive and index >= 1")
    changed = True
    while changed and t > 1:
        changed = False
        for d in range(t, 1, -1):
            if t % d == 0:
                r = perfect_power_root(c, d)
                if r is not None:
                    c, t = r, t // d
                    changed = True
                    break
    return c, t


class RadicalField:
    """The field Q(alpha) with alpha^index = radicand, alpha the positive real root."""

    def __init__(self, radicand: Fraction, index: int):
        self.radicand = radicand
        self.index = index
        self.modulus = Poly([-radicand] + [0] * (index - 1) + [1])

    def __repr__(self) -> str:
        return f"RadicalField({self.radicand}^(1/{self.index}))"

    def gen(self) -> "RadicalNumber":
        cs = [Fraction(0)] * self.index
        cs[1 % self.index] += 1
        return RadicalNumber(self, cs)

    def __call__(self, x) -> "RadicalNumber":
        if isinstance(x, RadicalNumber):
            if x.field is not self:
                raise ValueError("mixing elements of different radical fields")
            return x
        cs = [Fraction(0)] * self.index
        cs[0] = as_fraction(x)
        return RadicalNumber(self, cs)

    def alpha_mpf(self):
        r = self.radicand
        return mpmath.root(mpmath.mpf(r.numerator) / r.denominator, self.index)


@lru_cache(maxsize=None)
def radical_field(radicand: Fraction, index: int) -> RadicalField:
    c, t = simplify_radical(radicand, index)
    if t == 1:
        raise ValueError("radical is rational; no extension needed")
    return _field_cache(c, t)


@lru_cache(maxsize=None)
def _field_cache(c: Fraction, t: int) -> RadicalField:
    return RadicalField(c, t)


def radical_value(radicand, index: int, sign: int = 1):
    """sign * radicand^(1/index) as an exact Fraction or RadicalNumber."""
    c, t = simplify_radical(as_fraction(radicand), index)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if t == 1:
        return sign * c
    g = _field_cache(c, t).gen()
    return g if sign == 1 else -g


class RadicalNumber:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: RadicalField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    def _coerce(self, other):
        if isinstance(other, RadicalNumber):
            if other.field is not self.field:
                raise ValueError("mixing elements of different radical fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_part(self) -> Fraction:
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if isinstance(other, (int, Fraction, RadicalNumber)) else None
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RadicalNumber(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return RadicalNumber(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RadicalNumber(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RadicalNumber(self.field, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = self.field.index
        c = self.field.radicand
        out = [Fraction(0)] * t
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    k = i + j
                    if k >= t:
                        out[k - t] += a * b * c
                    else:
                        out[k] += a * b
        return RadicalNumber(self.field, out)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return self.field(1 / self.coeffs[0])
        g, s, _ = poly_xgcd(Poly(self.coeffs), self.field.modulus)
        if g.degree != 0:
            raise ArithmeticError("element not invertible (modulus reducible)")
        cs = list(s.coeffs) + [Fraction(0)] * (self.field.index - len(s.coeffs))
        return RadicalNumber(self.field, cs)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RadicalNumber(self.field, [a / other for a in self.coeffs])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def to_mpf(self):
        a = self.field.alpha_mpf()
        acc = mpmath.mpf(0)
        for cf in reversed(self.coeffs):
            acc = acc * a + mpmath.mpf(cf.numerator) / cf.denominator
        return acc

    def __float__(self) -> float:
        with mpmath.workdps(30):
            return float(self.to_mpf())

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*a^{i}")
        body = " + ".join(terms) or "0"
        return f"<{body} | a^{self.field.index}={self.field.radicand}>"
