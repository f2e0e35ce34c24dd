"""D-finite closure algebra: algebraic functions, composition, sums, products, conversions."""

from .closure import QuotientRing, algebraic_to_ode, compose_algebraic, ode_product, ode_sum
from .conversion import (
    compose_operators,
    ode_to_recurrence,
    recurrence_to_inhomogeneous_ode,
    recurrence_to_ode,
)
from .indicial import falling_factorial_poly, indicial_polynomial, indicial_polynomial_numeric
from .operators import (
    AlgebraicFunction,
    DerivationError,
    IndicialData,
    LinearODE,
    PRecurrence,
    operator_json_bytes,
)

__all__ = [
    "AlgebraicFunction", "DerivationError", "IndicialData", "LinearODE", "PRecurrence",
    "QuotientRing", "algebraic_to_ode", "compose_algebraic", "compose_operators",
    "falling_factorial_poly", "indicial_polynomial", "indicial_polynomial_numeric",
    "ode_product", "ode_sum", "ode_to_recurrence", "operator_json_bytes",
    "recurrence_to_inhomogeneous_ode", "recurrence_to_ode",
]
