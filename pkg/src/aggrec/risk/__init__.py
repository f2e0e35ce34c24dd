"""Compound loss models: derivation pipelines, evaluation, oracles and asymptotics."""

from .asymptotics import (
    AsymptoticEstimate,
    StabilityReport,
    asymptotic_for_model,
    asymptotic_gig,
    asymptotic_negbin_negbin,
    asymptotic_poisson_negbin,
    ratio_deviation,
    stability_report,
)
from .evaluate import MODES, DistTable, EvaluationError, dominant_rational_root, eval_distribution
from .models import (
    ClaimNumberSpec,
    ClaimSizeSpec,
    CompoundModel,
    ModelError,
    bessel_ode,
    degenerate_unit_claims,
)
from .oracles import (
    TruncationError,
    annihilation_residual,
    oracle_convolution,
    panjer_ab,
    panjer_for_model,
    panjer_recursion,
)
from .pipeline import (
    RecurrenceBundle,
    build_pgf_ode,
    claim_size_series,
    derive_recurrence,
    exact_normalized_available,
    pgf_series_normalized,
    pgf_series_numeric,
)

__all__ = [
    "AsymptoticEstimate", "StabilityReport", "asymptotic_for_model", "asymptotic_gig",
    "asymptotic_negbin_negbin", "asymptotic_poisson_negbin", "ratio_deviation", "stability_report",
    "MODES", "DistTable", "EvaluationError", "dominant_rational_root", "eval_distribution",
    "ClaimNumberSpec", "ClaimSizeSpec", "CompoundModel", "ModelError", "bessel_ode",
    "degenerate_unit_claims", "TruncationError", "oracle_convolution", "panjer_ab",
    "panjer_for_model", "panjer_recursion", "annihilation_residual", "RecurrenceBundle", "build_pgf_ode",
    "claim_size_series", "derive_recurrence", "exact_normalized_available",
    "pgf_series_normalized", "pgf_series_numeric",
]
