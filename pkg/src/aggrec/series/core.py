"""Truncated power series, exact (rational or radical coefficients) and numeric (mpmath)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import mpmath

from ..algebra import RadicalNumber

DEFAULT_DIGITS = 30


def to_mpf(x):
    """Numeric value of an exact or numeric scalar at the current mpmath precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, RadicalNumber):
        return x.to_mpf()
    if isinstance(x, int):
        return mpmath.mpf(x)
    return mpmath.mpmathify(x)


def mpf_str(x, digits: int) -> str:
    """Deterministic decimal rendering with ``digits`` significant digits."""
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-5, max_fixed=digits + 5)


@dataclass
class SeriesExact:
    """Exact truncated series c_0 + ... + c_N z^N."""

    coeffs: list
    N: int = field(default=-1)

    def __post_init__(self):
        if self.N < 0:
            self.N = len(self.coeffs) - 1
        self.coeffs = list(self.coeffs[: self.N + 1])
        self.coeffs += [Fraction(0)] * (self.N + 1 - len(self.coeffs))

    exact = True

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.N + 1

    def to_numeric(self, digits: int = DEFAULT_DIGITS) -> "SeriesNumeric":
        with mpmath.workdps(digits):
            return SeriesNumeric([to_mpf(c) for c in self.coeffs], self.N, digits)

    def to_json(self) -> list[str]:
        out = []
        for c in self.coeffs:
            if isinstance(c, Fraction):
                out.append(str(c))
            else:
                out.append(mpf_str(to_mpf(c), 30))
        return out


@dataclass
class SeriesNumeric:
    """Numeric truncated series with coefficients held at ``digits`` precision."""

    coeffs: list
    N: int = field(default=-1)
    digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError("numeric series need at least 15 digits")
        if self.N < 0:
            self.N = len(self.coeffs) - 1
        with mpmath.workdps(self.digits):
            cs = [to_mpf(c) for c in self.coeffs[: self.N + 1]]
            cs += [mpmath.mpf(0)] * (self.N + 1 - len(cs))
        self.coeffs = cs

    exact = False

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.N + 1

    def to_numeric(self, digits: int | None = None) -> "SeriesNumeric":
        return self if digits in (None, self.digits) else SeriesNumeric(self.coeffs, self.N, digits)

    def to_json(self) -> list[str]:
        return [mpf_str(c, self.digits) for c in self.coeffs]


Series = Union[SeriesExact, SeriesNumeric]


def _common(a: Series, b: Series):
    N = min(a.N, b.N)
    if a.exact and b.exact:
        return N, None
    digits = min(x.digits for x in (a, b) if not x.exact)
    return N, digits


def _wrap(coeffs, N, digits) -> Series:
    return SeriesExact(coeffs, N) if digits is None else SeriesNumeric(coeffs, N, digits)


def _prep(s: Series, N: int, digits):
    if digits is None:
        return list(s.coeffs[: N + 1])
    return [to_mpf(c) for c in s.coeffs[: N + 1]]


def mul_trunc(a: Sequence, b: Sequence, n: int, zero=Fraction(0)) -> list:
    """First n coefficients of a*b, skipping zero entries of ``a``."""
    out = [zero] * n
    lb = min(len(b), n)
    for i in range(min(len(a), n)):
        ai = a[i]
        if not ai:
            continue
        for j in range(min(lb, n - i)):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def reciprocal_coeffs(a: Sequence, n: int) -> list:
    if not a[0]:
        raise ZeroDivisionError("reciprocal of a series with zero constant term")
    inv0 = 1 / a[0]
    out = [inv0]
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j]:
                acc = acc + a[j] * out[k - j]
        out.append(-acc * inv0)
    return out


def compose_coeffs(a: Sequence, b: Sequence, n: int, zero=Fraction(0)) -> list:
    """a(b(z)) truncated to n terms; requires b[0] == 0."""
    if b and b[0]:
        raise ValueError("composition needs an inner series with zero constant term")
    out = [zero] * n
    if not a:
        return out
    out[0] = out[0] + a[0]
    b = list(b[:n]) + [zero] * max(0, n - len(b))
    power = [zero] * n
    power[0] = power[0] + 1
    for k in range(1, min(len(a), n)):
        # b^k has valuation k, so only indices >= k need computing
        nxt = [zero] * n
        for i in range(k - 1, n):
            pi = power[i]
            if not pi:
                continue
            for j in range(1, n - i):
                if b[j]:
                    nxt[i + j] = nxt[i + j] + pi * b[j]
        power = nxt
        ak = a[k]
        if ak:
            for i in range(k, n):
                if power[i]:
                    out[i] = out[i] + ak * power[i]
    return out


def series_arith(a: Series, b: Series | None, kind: str) -> Series:
    """Truncated ring operations on series: add, mul, compose (a after b), reciprocal."""
    if kind == "reciprocal":
        digits = None if a.exact else a.digits
        with mpmath.workdps(digits or DEFAULT_DIGITS):
            cs = reciprocal_coeffs(_prep(a, a.N, digits), a.N + 1)
            return _wrap(cs, a.N, digits)
    if b is None:
        raise ValueError(f"{kind} needs two operands")
    N, digits = _common(a, b)
    with mpmath.workdps(digits or DEFAULT_DIGITS):
        x, y = _prep(a, N, digits), _prep(b, N, digits)
        zero = Fraction(0) if digits is None else mpmath.mpf(0)
        if kind == "add":
            cs = [u + v for u, v in zip(x, y)]
        elif kind == "sub":
            cs = [u - v for u, v in zip(x, y)]
        elif kind == "mul":
            cs = mul_trunc(x, y, N + 1, zero)
        elif kind == "compose":
            cs = compose_coeffs(x, y, N + 1, zero)
        else:
            raise ValueError(f"unknown series operation {kind!r}")
        return _wrap(cs, N, digits)


def exp_shifted_coeffs(lam, f: Sequence, n: int, zero=Fraction(0)) -> list:
    """Coefficients of exp(lam * (f(z) - f(0))), via b' = lam f' b."""
    out = [zero + 1]
    for k in range(1, n):
        acc = zero
        for j in range(1, min(k, len(f) - 1) + 1):
            if f[j]:
                acc = acc + j * f[j] * out[k - j]
        out.append(acc * lam / k)
    return out


def power_coeffs(base: Sequence, alpha: Fraction, n: int, zero=Fraction(0)) -> list:
    """Coefficients of base(z)^alpha / base(0)^alpha (J.C.P. Miller recurrence)."""
    b0 = base[0]
    out = [zero + 1]
    for k in range(1, n):
        acc = zero
        for j in range(1, min(k, len(base) - 1) + 1):
            if base[j]:
                acc = acc + (alpha * j - (k - j)) * base[j] * out[k - j]
        out.append(acc / (k * b0))
    return out
