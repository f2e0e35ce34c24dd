"""From a compound model to an ODE for its pgf, a recurrence, and initial values."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from ..algebra import BiPoly, Poly, RadicalNumber, resultant_compose
from ..dfinite import (
    LinearODE,
    PRecurrence,
    algebraic_to_ode,
    compose_algebraic,
    ode_product,
    ode_to_recurrence,
)
from ..series import (
    DEFAULT_DIGITS,
    bessel_k,
    bessel_k_derivative,
    compose_coeffs,
    exp_shifted_coeffs,
    mul_trunc,
    power_coeffs,
    series_algebraic,
    taylor_from_ode,
    to_mpf,
)
from .models import CompoundModel, ModelError, bessel_ode

_ODE_CACHE: dict[str, LinearODE] = {}


def _gig_equations(model: CompoundModel) -> tuple[BiPoly, BiPoly]:
    """Equations of f(phi_X(z)) = u^(-theta/2) and g(phi_X(z)) = sqrt(chi u), u = psi + 2 - 2 phi_X."""
    cn = model.claim_number
    psi, chi, theta = cn.get("psi"), cn.get("chi"), cn.get("theta")
    half = theta / 2
    a, b = half.numerator, half.denominator
    u = BiPoly.from_terms({(0, 0): psi + 2, (1, 0): -2})
    outer_f = u**a * BiPoly.y() ** b - 1
    outer_g = BiPoly.y() ** 2 - u * chi
    inner = model.claim_size.equation()
    return resultant_compose(outer_f, inner), resultant_compose(outer_g, inner)


def build_pgf_ode(model: CompoundModel) -> LinearODE:
    """Homogeneous linear ODE satisfied by phi_N(phi_X(z))."""
    key = model.fingerprint()
    if key in _ODE_CACHE:
        return _ODE_CACHE[key]
    cn, inner = model.claim_number, model.claim_size.equation()
    if cn.kind in ("negbin", "binomial"):
        ode = algebraic_to_ode(resultant_compose(cn.outer_equation(), inner))
    elif cn.kind == "poisson":
        ode = compose_algebraic(LinearODE([Poly([-cn.get("lambda")]), Poly([1])]), inner)
    elif cn.kind == "mixed_poisson_gig":
        eq_f, eq_g = _gig_equations(model)
        ode = ode_product(algebraic_to_ode(eq_f), compose_algebraic(bessel_ode(cn.get("theta")), eq_g))
    elif cn.kind == "custom_ode":
        ode = compose_algebraic(cn.ode, inner)
    else:
        raise ModelError(f"unsupported claim number {cn.kind}")
    _ODE_CACHE[key] = ode
    return ode


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, RadicalNumber))


def claim_size_series(model: CompoundModel, N: int, digits: Optional[int] = None):
    """Coefficients 0..N of phi_X: exact when ``digits`` is None (rational or radical), else mpf."""
    g = model.claim_size.algebraic_function()
    if digits is None:
        if not _is_exact(g.y0):
            raise ModelError("claim-size branch value is not exact")
        return list(series_algebraic(g, N, keep_radical=True).coeffs)
    return list(series_algebraic(g, N, digits=digits).coeffs)


def exact_normalized_available(model: CompoundModel) -> bool:
    return model.claim_number.kind in ("poisson", "negbin", "binomial") and _is_exact(
        model.claim_size.algebraic_function().y0)


def pgf_series_normalized(model: CompoundModel, N: int) -> list:
    """Exact a_k / a_0 for k <= N (Panjer-class claim numbers with exact claim-size series)."""
    if not exact_normalized_available(model):
        raise ModelError("exact-normalized mode needs a Panjer-class claim number and exact claim-size series")
    f = claim_size_series(model, N)
    cn = model.claim_number
    zero = Fraction(0)
    if cn.kind == "poisson":
        return exp_shifted_coeffs(cn.get("lambda"), f, N + 1, zero)
    p = cn.get("p")
    if cn.kind == "negbin":
        base = [1 - (1 - p) * f[0]] + [-(1 - p) * c for c in f[1:]]
        return power_coeffs(base, -cn.get("alpha"), N + 1, zero)
    base = [1 - p + p * f[0]] + [p * c for c in f[1:]]
    return power_coeffs(base, Fraction(int(cn.get("m"))), N + 1, zero)


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def claim_number_series_at_zero(model: CompoundModel, N: int, digits: int) -> list:
    """P(N = j), j <= N, for claim numbers given by an ODE (GIG via Bessel series, custom via seeds)."""
    cn = model.claim_number
    with mpmath.workdps(digits + 10):
        if cn.kind == "custom_ode":
            return list(taylor_from_ode(cn.ode, 0, list(cn.seeds), N, digits + 10).coeffs)
        if cn.kind != "mixed_poisson_gig":
            raise ModelError("closed-form claim numbers do not need series coefficients")
        identity = [mpmath.mpf(0), mpmath.mpf(1)] + [mpmath.mpf(0)] * max(N - 1, 0)
        return _gig_composed(cn, identity[: N + 1], N, digits)


def _gig_composed(cn, f: list, N: int, digits: int) -> list:
    """Coefficients of phi_N(f(z)) for the GIG mixed Poisson pgf (current precision >= digits + 10)."""
    psi, chi, theta = _mp(cn.get("psi")), _mp(cn.get("chi")), cn.get("theta")
    th = _mp(theta)
    work = digits + 10
    zero = mpmath.mpf(0)
    u = [psi + 2 - 2 * f[0]] + [-2 * c for c in f[1:]]
    const = psi ** (th / 2) / bessel_k(theta, mpmath.sqrt(chi * psi), min(work, 50))
    part1 = [c * u[0] ** (-th / 2) for c in power_coeffs(u, -theta / 2, N + 1, zero)]
    g = [c * mpmath.sqrt(chi * u[0]) for c in power_coeffs(u, Fraction(1, 2), N + 1, zero)]
    c = g[0]
    seeds = [bessel_k(theta, c, min(work, 50)), bessel_k_derivative(theta, c, min(work, 50))]
    ks = taylor_from_ode(bessel_ode(theta), c, seeds, N, work).coeffs
    kg = compose_coeffs(ks, [zero] + g[1:], N + 1, zero)
    return [const * x for x in mul_trunc(part1, kg, N + 1, zero)]


def pgf_series_numeric(model: CompoundModel, N: int, digits: int = DEFAULT_DIGITS) -> list:
    """a_0..a_N = P(L = k) as mpf values carrying ``digits`` + 10 digits."""
    cn = model.claim_number
    with mpmath.workdps(digits + 10):
        f = claim_size_series(model, N, digits + 10)
        zero = mpmath.mpf(0)
        if cn.kind == "poisson":
            lam = _mp(cn.get("lambda"))
            out = [mpmath.exp(lam * (f[0] - 1)) * c for c in exp_shifted_coeffs(lam, f, N + 1, zero)]
        elif cn.kind == "negbin":
            p, alpha = _mp(cn.get("p")), cn.get("alpha")
            base = [1 - (1 - p) * f[0]] + [-(1 - p) * c for c in f[1:]]
            scale = (p / base[0]) ** _mp(alpha)
            out = [scale * c for c in power_coeffs(base, -alpha, N + 1, zero)]
        elif cn.kind == "binomial":
            p, m = _mp(cn.get("p")), int(cn.get("m"))
            base = [1 - p + p * f[0]] + [p * c for c in f[1:]]
            out = [base[0] ** m * c for c in power_coeffs(base, Fraction(m), N + 1, zero)]
        elif cn.kind == "mixed_poisson_gig":
            out = _gig_composed(cn, f, N, digits)
        else:
            if f[0] != 0:
                raise ModelError("custom_ode claim numbers need a claim size with P(X = 0) = 0")
            pn = taylor_from_ode(cn.ode, 0, list(cn.seeds), N, digits + 10).coeffs
            out = compose_coeffs(pn, f, N + 1, zero)
    # keep the guard digits: initial values feed a recursion that amplifies their rounding
    return out


@dataclass
class RecurrenceBundle:
    """A derived recurrence together with the initial values needed to run it."""

    ode: LinearODE
    recurrence: PRecurrence
    count: int
    initial_numeric: list
    initial_exact: Optional[list]
    digits: int
    fingerprint: str

    @property
    def order(self) -> int:
        return self.recurrence.order


def initial_count(rec: PRecurrence) -> int:
    """Number of initial values so that forward evaluation never divides by zero."""
    return rec.order + max(rec.max_nonneg_integer_root(), -1) + 1


def derive_recurrence(model: CompoundModel, digits: int = DEFAULT_DIGITS, exact: bool = True) -> RecurrenceBundle:
    ode = build_pgf_ode(model)
    rec = ode_to_recurrence(ode)
    count = initial_count(rec)
    numeric = pgf_series_numeric(model, count - 1, digits)
    exact_vals = pgf_series_normalized(model, count - 1) if exact and exact_normalized_available(model) else None
    return RecurrenceBundle(ode, rec, count, numeric, exact_vals, digits, model.fingerprint())
