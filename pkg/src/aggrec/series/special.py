"""Modified Bessel K of non-integer order and the Gamma function."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from ..algebra import as_fraction
from .core import to_mpf

MAX_DIGITS = 50
MAX_X = 30


def _check(theta, x, digits):
    th = as_fraction(theta)
    if th.denominator == 1:
        raise ValueError("integer Bessel order is not supported")
    if digits > MAX_DIGITS or digits < 1:
        raise ValueError(f"digits must be in 1..{MAX_DIGITS}")
    xv = to_mpf(x)
    if not (0 < xv <= MAX_X):
        raise ValueError(f"x must satisfy 0 < x <= {MAX_X}")
    return th


def _bessel_i_series(nu, x, digits: int, derivative: bool):
    """I_nu(x) (or its derivative) from the ascending series, at the current precision."""
    half = x / 2
    term = half**nu / mpmath.gamma(nu + 1)
    total = mpmath.mpf(0)
    eps = mpmath.mpf(10) ** (-(digits + 5))
    k = 0
    while True:
        contrib = term * (2 * k + nu) / x if derivative else term
        total += contrib
        k += 1
        term = term * half * half / (k * (k + nu))
        # the terms decrease once k exceeds x/2; stop when negligible
        if k > x and abs(term) <= eps * abs(total):
            break
    return total


def _bessel(theta, x, digits: int, derivative: bool):
    th = _check(theta, x, digits)
    xv = float(to_mpf(x))
    # I_{+-theta} are about e^x while K is about e^-x: the difference loses ~2x/ln 10 digits
    work = digits + 15 + int(2 * xv / math.log(10))
    with mpmath.workdps(work):
        nu = to_mpf(th)
        xx = to_mpf(x)
        diff = _bessel_i_series(-nu, xx, work, derivative) - _bessel_i_series(nu, xx, work, derivative)
        val = mpmath.pi * diff / (2 * mpmath.sin(mpmath.pi * nu))
    return +val


def bessel_k(theta, x, digits: int = 30):
    """K_theta(x) = pi (I_{-theta}(x) - I_theta(x)) / (2 sin(pi theta))."""
    return _bessel(theta, x, digits, False)


def bessel_k_derivative(theta, x, digits: int = 30):
    """d/dx K_theta(x) from the termwise-differentiated I series."""
    return _bessel(theta, x, digits, True)


def gamma_eval(x, digits: int = 30):
    """Gamma(x) for 0 < x <= 50."""
    with mpmath.workdps(digits + 10):
        xv = to_mpf(x)
        if not (0 < xv <= 50):
            raise ValueError("gamma_eval needs 0 < x <= 50")
        return mpmath.gamma(xv)
