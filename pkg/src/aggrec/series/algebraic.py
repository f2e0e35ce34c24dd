"""Newton lifting of an algebraic branch to a truncated power series."""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np
from scipy.signal import fftconvolve

from ..algebra import Poly, RadicalNumber
from ..dfinite import AlgebraicFunction
from .core import DEFAULT_DIGITS, SeriesExact, SeriesNumeric, mul_trunc, reciprocal_coeffs, to_mpf


def _eval_bivariate(y_coeffs: list[list], y: list, n: int, zero) -> list:
    """P(z, y(z)) mod z^n by Horner in y."""
    acc = [zero] * n
    for c in reversed(y_coeffs):
        acc = mul_trunc(acc, y, n, zero)
        for i in range(min(len(c), n)):
            acc[i] = acc[i] + c[i]
    return acc


def _refine_root(p0: Poly, y0, digits: int):
    """Polish a numeric simple root of P(0, y) to the working precision."""
    dp0 = p0.derivative()
    y = mpmath.mpmathify(y0)
    for _ in range(digits):
        step = p0.eval_with(y, to_mpf) / dp0.eval_with(y, to_mpf)
        y -= step
        if abs(step) <= abs(y) * mpmath.mpf(10) ** (-digits - 5):
            break
    return y


def series_algebraic(g: AlgebraicFunction, N: int, digits: int | None = None,
                     keep_radical: bool = False):
    """Coefficients 0..N of the branch of P(z, y) = 0 through (0, y0).

    Exact mode is used for a rational y0 (and for a radical y0 when
    ``keep_radical`` is set); otherwise the lifting runs in mpmath at
    ``digits`` precision. Each Newton step doubles the number of correct
    coefficients, so ceil(log2(N + 1)) steps are taken.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    y0 = g.y0
    exact = digits is None and (isinstance(y0, (int, Fraction)) or (keep_radical and isinstance(y0, RadicalNumber)))
    py = g.p.diff_y()
    if exact:
        zero = Fraction(0)
        P = [list(c.coeffs) for c in g.p.y_coeffs]
        Py = [list(c.coeffs) for c in py.y_coeffs]
        y = [y0]
        return _lift(P, Py, y, N, zero, SeriesExact)
    dps = digits or DEFAULT_DIGITS
    with mpmath.workdps(dps + 10):
        zero = mpmath.mpf(0)
        P = [[to_mpf(c) for c in q.coeffs] for q in g.p.y_coeffs]
        Py = [[to_mpf(c) for c in q.coeffs] for q in py.y_coeffs]
        y = [_refine_root(g.p.at_z(0), to_mpf(y0), dps + 10)]
        s = _lift(P, Py, y, N, zero, None)
    return SeriesNumeric(s, N, dps)


def _lift(P, Py, y, N, zero, wrap):
    m = 1
    while m < N + 1:
        m = min(2 * m, N + 1)
        y = y + [zero] * (m - len(y))
        r = _eval_bivariate(P, y, m, zero)
        d = _eval_bivariate(Py, y, m, zero)
        corr = mul_trunc(r, reciprocal_coeffs(d, m), m, zero)
        y = [a - b for a, b in zip(y, corr)]
    return wrap(y, N) if wrap else y


def algebraic_residual(g: AlgebraicFunction, s) -> list:
    """Coefficients 0..N of P(z, s(z)) (exactly zero for a correct exact lift)."""
    n = s.N + 1
    if s.exact:
        P = [list(c.coeffs) for c in g.p.y_coeffs]
        return _eval_bivariate(P, list(s.coeffs), n, Fraction(0))
    with mpmath.workdps(s.digits):
        P = [[to_mpf(c) for c in q.coeffs] for q in g.p.y_coeffs]
        return _eval_bivariate(P, list(s.coeffs), n, mpmath.mpf(0))


def _fmul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    if min(len(a), len(b)) > 64:
        out = fftconvolve(a[:n], b[:n])[:n]
    else:
        out = np.convolve(a[:n], b[:n])[:n]
    if len(out) < n:
        out = np.concatenate([out, np.zeros(n - len(out))])
    return out


def _finv(a: np.ndarray, n: int) -> np.ndarray:
    """1/a mod z^n by Newton iteration."""
    inv = np.array([1.0 / a[0]])
    m = 1
    while m < n:
        m = min(2 * m, n)
        e = _fmul(a, inv, m)
        inv = np.concatenate([inv, np.zeros(m - len(inv))])
        inv = inv - _fmul(inv, e - np.eye(1, m).ravel(), m)
    return inv[:n]


def series_algebraic_float(g: AlgebraicFunction, N: int) -> np.ndarray:
    """Float64 coefficients 0..N of the branch, via FFT-based Newton lifting.

    Absolute accuracy is about 1e-16 times the largest coefficient; tiny
    tail coefficients lose relative accuracy. Intended for timing baselines.
    """
    with mpmath.workdps(30):
        y0 = float(to_mpf(g.y0)) if not isinstance(g.y0, (int, Fraction, RadicalNumber)) \
            else float(g.y0 if not isinstance(g.y0, RadicalNumber) else g.y0.to_mpf())
    P = [np.array([float(c) for c in p.coeffs] or [0.0]) for p in g.p.y_coeffs]
    Py = [np.array([j * float(c) for c in p.coeffs] or [0.0]) for j, p in enumerate(g.p.y_coeffs)][1:]
    y = np.array([y0])
    m = 1
    while m < N + 1:
        m = min(2 * m, N + 1)
        y = np.concatenate([y, np.zeros(m - len(y))])
        acc_p = np.zeros(m)
        for c in reversed(P):
            acc_p = _fmul(acc_p, y, m)
            acc_p[: min(len(c), m)] += c[:m]
        acc_d = np.zeros(m)
        for c in reversed(Py):
            acc_d = _fmul(acc_d, y, m)
            acc_d[: min(len(c), m)] += c[:m]
        y = y - _fmul(acc_p, _finv(acc_d, m), m)
    return y[: N + 1]
