"""Taylor expansion of an ODE solution about an ordinary point."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import mpmath

from ..algebra import Poly
from ..dfinite import LinearODE
from .core import DEFAULT_DIGITS, SeriesExact, SeriesNumeric, to_mpf


def _shift_coeffs(q: Poly, c, exact: bool) -> list:
    """Coefficients of q(c + t) in t."""
    if exact:
        return list(q.shift(c).coeffs)
    n = len(q.coeffs)
    out = []
    for j in range(n):
        acc = mpmath.mpf(0)
        for i in range(j, n):
            if q.coeffs[i]:
                acc += comb(i, j) * to_mpf(q.coeffs[i]) * c ** (i - j)
        out.append(acc)
    return out


def taylor_from_ode(e: LinearODE, center, seeds: Sequence, N: int, digits: int | None = None):
    """Coefficients b_0..b_N of f(center + t) for the solution with the given derivative seeds.

    ``seeds`` are f(c), f'(c), ..., f^(d-1)(c). The coefficients follow from
    sum_{k,m} q_{k,m} (n-m+1)_k b_{n+k-m} = 0 where q_{k,m} is the t^m
    coefficient of Q_k(c + t). Exact arithmetic is used when the center and
    all seeds are rational and ``digits`` is None.
    """
    if not e.is_homogeneous():
        raise ValueError("taylor_from_ode needs a homogeneous ODE")
    d = e.order
    if len(seeds) != d:
        raise ValueError(f"need {d} seeds, got {len(seeds)}")
    exact = digits is None and isinstance(center, (int, Fraction)) and all(isinstance(s, (int, Fraction)) for s in seeds)
    dps = digits or DEFAULT_DIGITS
    with mpmath.workdps(dps + 10):
        c = Fraction(center) if exact else to_mpf(center)
        shifted = [_shift_coeffs(q, c, exact) for q in e.coeffs]
        lead = shifted[d][0] if shifted[d] else 0
        if (lead == 0) if exact else (abs(lead) <= mpmath.mpf(10) ** (-dps)):
            raise ValueError("center is a singular point of the ODE")
        if exact:
            b = [Fraction(s) / factorial(k) for k, s in enumerate(seeds)]
        else:
            b = [to_mpf(s) / factorial(k) for k, s in enumerate(seeds)]
        terms = [(k, m, qk[m]) for k, qk in enumerate(shifted) for m in range(len(qk))
                 if qk[m] and not (k == d and m == 0)]
        for n in range(0, N - d + 1):
            acc = 0
            for k, m, q in terms:
                idx = n - m + k
                if idx < 0:
                    continue
                rf = 1
                for t in range(1, k + 1):
                    rf *= n - m + t
                if rf:
                    acc = acc + q * rf * b[idx]
            rf = 1
            for t in range(1, d + 1):
                rf *= n + t
            b.append(-acc / (lead * rf))
        b = b[: N + 1]
        if exact:
            return SeriesExact(b, N)
        return SeriesNumeric(b, N, dps)


def eval_series_at(s, h):
    """Sum of the truncated series at offset h (numeric)."""
    with mpmath.workdps(getattr(s, "digits", DEFAULT_DIGITS) + 5):
        h = to_mpf(h)
        acc = mpmath.mpf(0)
        for c in reversed(s.coeffs):
            acc = acc * h + to_mpf(c)
        return acc
