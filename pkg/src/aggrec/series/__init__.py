"""Truncated power series and special functions."""

from .algebraic import algebraic_residual, series_algebraic, series_algebraic_float
from .core import (
    DEFAULT_DIGITS,
    Series,
    SeriesExact,
    SeriesNumeric,
    compose_coeffs,
    exp_shifted_coeffs,
    mpf_str,
    mul_trunc,
    power_coeffs,
    reciprocal_coeffs,
    series_arith,
    to_mpf,
)
from .special import bessel_k, bessel_k_derivative, gamma_eval
from .taylor import eval_series_at, taylor_from_ode

__all__ = [
    "DEFAULT_DIGITS", "Series", "SeriesExact", "SeriesNumeric", "algebraic_residual",
    "bessel_k", "bessel_k_derivative", "compose_coeffs", "eval_series_at", "exp_shifted_coeffs",
    "gamma_eval", "mpf_str", "mul_trunc", "power_coeffs", "reciprocal_coeffs", "series_algebraic",
    "series_algebraic_float", "series_arith", "taylor_from_ode", "to_mpf",
]
