"""Closed-form coefficient asymptotics for the catalog families and a stability analysis.

Forward evaluation of a recurrence is numerically stable when the wanted
sequence is the dominant solution. The sequence a_n = [z^n] phi(z) grows like
z1^(-n) n^(-w-1) when phi behaves like (z1 - z)^w at its dominant singularity
z1, so it dominates when its local exponent w has the smallest real part among
the indicial roots of the ODE there (integer roots give analytic or logarithmic
solutions whose coefficients decay at least like 1/n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from ..algebra import Poly, as_fraction, complex_roots_numeric, exact_div, rational_roots
from ..algebra.numberfield import perfect_power_root
from ..algebra.roots import squarefree_part
from ..dfinite import IndicialData, indicial_polynomial, ode_to_recurrence, recurrence_to_ode
from ..dfinite.indicial import indicial_polynomial_numeric
from ..series import bessel_k, gamma_eval, to_mpf
from .models import CompoundModel
from .pipeline import build_pgf_ode

_DPS = 30


@dataclass
class AsymptoticEstimate:
    """a_n ~ prefactor * z1^(-n) * n^exponent * exp(stretch_coeff * n^stretch_power).

    ``C`` is the family constant as usually stated; ``prefactor`` is the whole
    n-independent factor (equal to C except for the GIG family, where it
    also absorbs chi^(-theta/2) D^(-theta) 2^(theta-1)).
    """

    family: str
    z1: object
    exponent: Fraction
    C: object
    D: object = None
    stretch_coeff: object = None
    stretch_power: Optional[Fraction] = None
    prefactor: object = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.prefactor is None:
            self.prefactor = self.C

    def log_estimate(self, n: int):
        with mpmath.workdps(_DPS):
            val = mpmath.log(to_mpf(self.prefactor)) - n * mpmath.log(to_mpf(self.z1)) \
                + to_mpf(self.exponent) * mpmath.log(n)
            if self.stretch_coeff is not None:
                val += to_mpf(self.stretch_coeff) * mpmath.mpf(n) ** to_mpf(self.stretch_power)
            return val

    def estimate(self, n: int):
        with mpmath.workdps(_DPS):
            return mpmath.exp(self.log_estimate(n))

    def ratio(self, n: int, log_a: float) -> float:
        """a_n / estimate(n) from log a_n."""
        with mpmath.workdps(_DPS):
            return float(mpmath.exp(mpmath.mpf(log_a) - self.log_estimate(n)))

    def to_json(self) -> dict:
        def s(x):
            if isinstance(x, Fraction):
                return str(x)
            return mpmath.nstr(to_mpf(x), 20) if x is not None else None

        return {
            "family": self.family,
            "z1": s(self.z1),
            "exponent": str(self.exponent),
            "C": s(self.C),
            "prefactor": s(self.prefactor),
            "D": s(self.D),
            "stretch_coeff": s(self.stretch_coeff),
            "stretch_power": None if self.stretch_power is None else str(self.stretch_power),
        }


def _exact_root(c: Fraction, t: Fraction):
    """c^t as an exact Fraction when possible, else an mpf."""
    if t.denominator == 1:
        return c ** t.numerator
    r = perfect_power_root(c, t.denominator)
    if r is not None:
        return r ** t.numerator
    return to_mpf(c) ** to_mpf(t)


def asymptotic_negbin_negbin(alpha, beta, p, q) -> AsymptoticEstimate:
    alpha, beta, p, q = map(as_fraction, (alpha, beta, p, q))
    with mpmath.workdps(_DPS):
        root = _exact_root(1 - p, 1 / beta)
        c = 1 - q * root
        z1 = c / (1 - q)
        C = (to_mpf(p * q) ** to_mpf(alpha) * to_mpf(1 - p) ** to_mpf(alpha / beta)
             / (gamma_eval(alpha, _DPS) * to_mpf(beta) ** to_mpf(alpha) * to_mpf(c) ** to_mpf(alpha)))
    return AsymptoticEstimate("negbin_negbin", z1, alpha - 1, C,
                              params={"alpha": alpha, "beta": beta, "p": p, "q": q})


def asymptotic_gig(psi, chi, theta, q) -> AsymptoticEstimate:
    psi, chi, theta, q = map(as_fraction, (psi, chi, theta, q))
    z1 = 1 / (1 - psi * q / (2 + psi))
    D = (2 + psi) * (2 + psi * (1 - q)) / (2 * q)
    with mpmath.workdps(_DPS):
        th = to_mpf(theta)
        C = to_mpf(psi) ** (th / 2) / bessel_k(theta, mpmath.sqrt(to_mpf(chi * psi)), _DPS)
        # C chi^(-theta/2) D^(-theta) (2n)^(theta-1) z1^(-n)
        lead = C * to_mpf(chi) ** (-th / 2) * to_mpf(D) ** (-th) * mpmath.mpf(2) ** (th - 1)
    return AsymptoticEstimate("gig_geometric", z1, theta - 1, C, D=D, prefactor=lead,
                              params={"psi": psi, "chi": chi, "theta": theta, "q": q})


def asymptotic_poisson_negbin(lam, p) -> AsymptoticEstimate:
    """Poisson(lam) claim counts with negative binomial (beta = 1/2, q = p) claim sizes."""
    lam, p = as_fraction(lam), as_fraction(p)
    with mpmath.workdps(_DPS):
        lm, pm = to_mpf(lam), to_mpf(p)
        C = (lm ** (mpmath.mpf(1) / 3) * pm ** (mpmath.mpf(1) / 6)
             / (mpmath.cbrt(2) * mpmath.sqrt(3 * mpmath.pi)) * mpmath.exp(-lm))
        kappa = 3 * mpmath.cbrt(pm) * (lm / 2) ** (mpmath.mpf(2) / 3)
    return AsymptoticEstimate("poisson_negbin_half", 1 / (1 - p), Fraction(-5, 6), C,
                              stretch_coeff=kappa, stretch_power=Fraction(1, 3),
                              params={"lambda": lam, "p": p})


def asymptotic_for_model(model: CompoundModel) -> Optional[AsymptoticEstimate]:
    fam = model.family()
    cn, cs = model.claim_number, model.claim_size
    if fam == "negbin_negbin":
        return asymptotic_negbin_negbin(cn.get("alpha"), cs.get("beta"), cn.get("p"), cs.get("q"))
    if fam == "gig_geometric":
        return asymptotic_gig(cn.get("psi"), cn.get("chi"), cn.get("theta"), cs.get("q"))
    if fam == "poisson_negbin_half":
        return asymptotic_poisson_negbin(cn.get("lambda"), cs.get("q"))
    return None


@dataclass
class StabilityReport:
    singularities: list
    classification: dict
    indicial: Optional[IndicialData]
    verdict: str
    rationale: str
    asymptotic: Optional[AsymptoticEstimate] = None

    def to_json(self) -> dict:
        ind = None
        if self.indicial is not None:
            d = self.indicial
            ind = {
                "point": _fmt(d.singularity),
                "classification": d.classification,
                "polynomial": [str(c) for c in d.indicial.coeffs],
                "rational_roots": [[str(r), m] for r, m in d.roots],
                "numeric_roots": [_fmt(r) for r in d.numeric_roots],
            }
        return {
            "format_version": 1,
            "dominant_singularities": [{"point": _fmt(z), "multiplicity": m} for z, m in self.singularities],
            "classification": {_fmt(k): v for k, v in self.classification.items()},
            "indicial": ind,
            "verdict": self.verdict,
            "rationale": self.rationale,
            "asymptotic": None if self.asymptotic is None else self.asymptotic.to_json(),
        }


def _fmt(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    with mpmath.workdps(_DPS):
        x = mpmath.mpmathify(x)
        if isinstance(x, mpmath.mpc) and abs(x.imag) <= mpmath.mpf(10) ** -25 * max(1, abs(x)):
            x = x.real
        return mpmath.nstr(x, 20)


def _dominant_roots(lead: Poly):
    """Nonzero roots of minimal modulus: (exact list of (root, mult), numeric list of (value, factor))."""
    exact = [(r, m) for r, m in rational_roots(lead) if r != 0]
    rest = lead
    for r, m in rational_roots(lead):
        for _ in range(m):
            rest = exact_div(rest, Poly([-r, 1]))
    numeric = [v for v, _ in complex_roots_numeric(rest, _DPS)] if rest.degree >= 1 else []
    mods = [abs(r) for r, _ in exact] + [float(abs(v)) for v in numeric]
    if not mods:
        return [], [], rest
    rmin = min(mods)
    tol = 1e-12 * max(1.0, float(rmin))
    dom_exact = [(r, m) for r, m in exact if abs(float(abs(r)) - float(rmin)) <= tol]
    dom_num = [v for v in numeric if abs(float(abs(v)) - float(rmin)) <= tol]
    return dom_exact, dom_num, rest


def _real(x) -> float:
    return float(mpmath.re(mpmath.mpmathify(x))) if not isinstance(x, Fraction) else float(x)


def stability_report(model: CompoundModel) -> StabilityReport:
    """Singularity and indicial analysis of the ODE recovered from the derived recurrence."""
    rec = ode_to_recurrence(build_pgf_ode(model))
    ode = recurrence_to_ode(rec)
    fam = model.family()
    est = asymptotic_for_model(model)
    dom_exact, dom_num, rest = _dominant_roots(ode.leading)
    sing = [(r, m) for r, m in dom_exact] + [(v, 1) for v in dom_num]
    classes: dict = {}
    data: Optional[IndicialData] = None
    for r, _ in dom_exact:
        d = indicial_polynomial(ode, r)
        classes[r] = d.classification
        data = data or d
    for v in dom_num:
        d = indicial_polynomial_numeric(ode, squarefree_part(rest), v, _DPS)
        classes[v] = d.classification
        data = data or d
    if not sing:
        return StabilityReport([], {}, None, "inconclusive", "leading coefficient has no nonzero roots", est)
    if len(sing) > 1:
        return StabilityReport(sing, classes, data, "inconclusive",
                               "several singularities share the minimal modulus", est)
    z, _ = sing[0]
    cls = classes[z]
    if cls == "irregular-singular":
        if fam == "poisson_negbin_half" and est is not None and isinstance(z, Fraction) and z == est.z1:
            return StabilityReport(sing, classes, data, "stable",
                                   "irregular singularity of the Poisson/negative binomial (beta = 1/2) family; "
                                   "the stretched-exponential growth dominates all other solutions", est)
        return StabilityReport(sing, classes, data, "inconclusive",
                               "irregular singularity outside the known catalog family", est)
    if est is None or fam == "poisson_negbin_half":
        return StabilityReport(sing, classes, data, "inconclusive",
                               "no closed-form local exponent is known for this model", est)
    if not (isinstance(z, Fraction) and z == est.z1) and not (
            not isinstance(z, Fraction) and abs(_real(z) - float(to_mpf(est.z1))) < 1e-12):
        return StabilityReport(sing, classes, data, "inconclusive",
                               "dominant singularity differs from the analytic one", est)
    w_star = -(est.exponent + 1)
    roots = [(r, m) for r, m in data.roots] + [(v, 1) for v in data.numeric_roots]
    own = [(r, m) for r, m in roots if isinstance(r, Fraction) and r == w_star]
    if not own:
        return StabilityReport(sing, classes, data, "inconclusive",
                               f"local exponent {w_star} is not an indicial root", est)
    if own[0][1] > 1:
        return StabilityReport(sing, classes, data, "inconclusive",
                               f"local exponent {w_star} is a repeated indicial root", est)
    others = [r for r, _ in roots if not (isinstance(r, Fraction) and r == w_star)]
    if all(_real(r) > float(w_star) + 1e-12 for r in others):
        return StabilityReport(sing, classes, data, "stable",
                               f"regular singularity at {_fmt(z)}; the sequence's local exponent {w_star} "
                               "has the smallest real part among the indicial roots, so it is the dominant solution",
                               est)
    return StabilityReport(sing, classes, data, "inconclusive",
                           f"another indicial root competes with the local exponent {w_star}", est)


def ratio_deviation(est: AsymptoticEstimate, n: int, log_a: float) -> float:
    """|a_n / estimate - 1|."""
    return abs(est.ratio(n, log_a) - 1)


__all__ = [
    "AsymptoticEstimate", "StabilityReport", "asymptotic_negbin_negbin", "asymptotic_gig",
    "asymptotic_poisson_negbin", "asymptotic_for_model", "stability_report", "ratio_deviation",
]
