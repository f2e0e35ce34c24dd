"""Exact rational algebra: polynomials, rational functions, linear algebra over Q(z)."""

from .bipoly import BiPoly, resultant_compose
from .linalg import EmptyNullspaceError, clear_denominators, nullspace_ratfun, solve_ratfun
from .numberfield import RadicalField, RadicalNumber, radical_value, simplify_radical
from .poly import (
    Poly,
    as_fraction,
    exact_div,
    format_fraction,
    poly_arith,
    poly_derivative,
    poly_divrem,
    poly_eval,
    poly_gcd,
    poly_lcm,
    poly_xgcd,
    squarefree_part,
)
from .ratfun import RatFun
from .roots import complex_roots_numeric, minimal_modulus_roots, mpf_to_fraction, rational_roots

__all__ = [
    "BiPoly", "EmptyNullspaceError", "Poly", "RadicalField", "RadicalNumber", "RatFun",
    "as_fraction", "clear_denominators", "complex_roots_numeric", "exact_div",
    "format_fraction", "minimal_modulus_roots", "mpf_to_fraction", "nullspace_ratfun",
    "poly_arith", "poly_derivative", "poly_divrem", "poly_eval", "poly_gcd", "poly_lcm",
    "poly_xgcd", "radical_value", "rational_roots", "resultant_compose",
    "simplify_radical", "solve_ratfun", "squarefree_part",
]
