"""Claim-number and claim-size specifications with their algebraic encodings."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from ..algebra import BiPoly, Poly, as_fraction, radical_value
from ..dfinite import AlgebraicFunction, LinearODE

MAX_EXPONENT_DENOMINATOR = 12

CLAIM_NUMBER_KINDS = ("poisson", "negbin", "binomial", "mixed_poisson_gig", "custom_ode")
CLAIM_SIZE_KINDS = ("negbin", "geometric_shifted", "binomial", "algebraic", "pmf")

# Panjer (a, b, 0) class members
PANJER_KINDS = ("poisson", "negbin", "binomial")


class ModelError(ValueError):
    """Invalid model parameters or unsupported combination."""


def _unit_interval(name: str, v: Fraction) -> None:
    if not (0 < v < 1):
        raise ModelError(f"{name} must lie in (0, 1), got {v}")


def _positive(name: str, v: Fraction) -> None:
    if v <= 0:
        raise ModelError(f"{name} must be positive, got {v}")


def _guard_denominator(name: str, v: Fraction) -> None:
    if v.denominator > MAX_EXPONENT_DENOMINATOR:
        raise ModelError(f"{name} = {v}: denominator exceeds {MAX_EXPONENT_DENOMINATOR}")


def _frac(params: dict, key: str) -> Fraction:
    if key not in params:
        raise ModelError(f"missing parameter {key!r}")
    try:
        return as_fraction(params[key])
    except (TypeError, ValueError) as exc:
        raise ModelError(f"parameter {key!r}: {exc}") from exc


def _int(params: dict, key: str) -> int:
    v = _frac(params, key)
    if v.denominator != 1 or v < 1:
        raise ModelError(f"{key} must be a positive integer, got {v}")
    return int(v)


@dataclass(frozen=True)
class ClaimNumberSpec:
    kind: str
    params: dict = field(default_factory=dict)
    ode: Optional[LinearODE] = None
    seeds: tuple = ()

    def __post_init__(self):
        if self.kind not in CLAIM_NUMBER_KINDS:
            raise ModelError(f"unknown claim-number kind {self.kind!r}")
        p = self.params
        if self.kind == "poisson":
            _positive("lambda", _frac(p, "lambda"))
        elif self.kind == "negbin":
            alpha = _frac(p, "alpha")
            _positive("alpha", alpha)
            _guard_denominator("alpha", alpha)
            _unit_interval("p", _frac(p, "p"))
        elif self.kind == "binomial":
            _int(p, "m")
            _unit_interval("p", _frac(p, "p"))
        elif self.kind == "mixed_poisson_gig":
            _positive("psi", _frac(p, "psi"))
            _positive("chi", _frac(p, "chi"))
            theta = _frac(p, "theta")
            _positive("theta", theta)
            if theta.denominator == 1:
                raise ModelError("integer theta is not supported (Bessel K of integer order)")
            _guard_denominator("theta/2", theta / 2)
        elif self.kind == "custom_ode":
            if self.ode is None or not self.ode.is_homogeneous():
                raise ModelError("custom_ode needs a homogeneous LinearODE")
            if len(self.seeds) != self.ode.order:
                raise ModelError(f"custom_ode needs {self.ode.order} seeds")
            if self.ode.leading(Fraction(0)) == 0:
                raise ModelError("custom_ode: z = 0 must be an ordinary point")

    def get(self, key: str) -> Fraction:
        return _frac(self.params, key)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        out.update({k: str(as_fraction(v)) for k, v in sorted(self.params.items())})
        if self.kind == "custom_ode":
            out["ode"] = self.ode.to_json()
            out["seeds"] = [str(as_fraction(s)) for s in self.seeds]
        return out

    @staticmethod
    def poisson(lam) -> "ClaimNumberSpec":
        return ClaimNumberSpec("poisson", {"lambda": as_fraction(lam)})

    @staticmethod
    def negbin(alpha, p) -> "ClaimNumberSpec":
        return ClaimNumberSpec("negbin", {"alpha": as_fraction(alpha), "p": as_fraction(p)})

    @staticmethod
    def binomial(m, p) -> "ClaimNumberSpec":
        return ClaimNumberSpec("binomial", {"m": as_fraction(m), "p": as_fraction(p)})

    @staticmethod
    def gig(psi, chi, theta) -> "ClaimNumberSpec":
        return ClaimNumberSpec("mixed_poisson_gig", {"psi": as_fraction(psi), "chi": as_fraction(chi),
                                                     "theta": as_fraction(theta)})

    @staticmethod
    def custom(ode: LinearODE, seeds) -> "ClaimNumberSpec":
        return ClaimNumberSpec("custom_ode", {}, ode, tuple(as_fraction(s) for s in seeds))

    def outer_equation(self) -> Optional[BiPoly]:
        """P(x, y) with y = pgf(x), for the algebraic claim-number kinds."""
        if self.kind == "negbin":
            # (1 - (1-p) x)^u y^v = p^u for alpha = u/v
            alpha, p = self.get("alpha"), self.get("p")
            u, v = alpha.numerator, alpha.denominator
            base = BiPoly.from_terms({(0, 0): 1, (1, 0): -(1 - p)})
            return base**u * BiPoly.y() ** v - p**u
        if self.kind == "binomial":
            m, p = int(self.get("m")), self.get("p")
            return BiPoly.y() - BiPoly.from_terms({(0, 0): 1 - p, (1, 0): p}) ** m
        return None


@dataclass(frozen=True)
class ClaimSizeSpec:
    kind: str
    params: dict = field(default_factory=dict)
    function: Optional[AlgebraicFunction] = None
    pmf: tuple = ()

    def __post_init__(self):
        if self.kind not in CLAIM_SIZE_KINDS:
            raise ModelError(f"unknown claim-size kind {self.kind!r}")
        p = self.params
        if self.kind == "negbin":
            beta = _frac(p, "beta")
            _positive("beta", beta)
            _guard_denominator("beta", beta)
            _unit_interval("q", _frac(p, "q"))
        elif self.kind == "geometric_shifted":
            _unit_interval("q", _frac(p, "q"))
        elif self.kind == "binomial":
            _int(p, "m")
            _unit_interval("q", _frac(p, "q"))
        elif self.kind == "algebraic":
            if self.function is None:
                raise ModelError("algebraic claim size needs an AlgebraicFunction")
            if self.function.p(Fraction(1), Fraction(1)) != 0:
                raise ModelError("algebraic claim size: P(1, 1) must vanish for a pgf")
        elif self.kind == "pmf":
            if not self.pmf or any(c < 0 for c in self.pmf):
                raise ModelError("pmf must be a nonempty vector of nonnegative rationals")
            if sum(self.pmf) != 1:
                raise ModelError(f"pmf sums to {sum(self.pmf)}, not 1")
            if self.pmf[0] == 1:
                raise ModelError("claim size identically zero")
        if self.kind != "algebraic":
            with mpmath.workdps(40):
                g = self.pgf_at_one()
            if abs(g - 1) > mpmath.mpf(10) ** -20:
                raise ModelError("pgf does not equal 1 at z = 1")

    def get(self, key: str) -> Fraction:
        return _frac(self.params, key)

    @staticmethod
    def negbin(beta, q) -> "ClaimSizeSpec":
        return ClaimSizeSpec("negbin", {"beta": as_fraction(beta), "q": as_fraction(q)})

    @staticmethod
    def geometric_shifted(q) -> "ClaimSizeSpec":
        return ClaimSizeSpec("geometric_shifted", {"q": as_fraction(q)})

    @staticmethod
    def binomial(m, q) -> "ClaimSizeSpec":
        return ClaimSizeSpec("binomial", {"m": as_fraction(m), "q": as_fraction(q)})

    @staticmethod
    def algebraic(g: AlgebraicFunction) -> "ClaimSizeSpec":
        return ClaimSizeSpec("algebraic", {}, g)

    @staticmethod
    def from_pmf(values) -> "ClaimSizeSpec":
        return ClaimSizeSpec("pmf", {}, None, tuple(as_fraction(v) for v in values))

    def pgf_at_one(self):
        """Closed-form pgf evaluated at z = 1 (a consistency check of the parameters)."""
        k = self.kind
        if k == "pmf":
            return _mp(sum(self.pmf))
        if k == "algebraic":
            return mpmath.mpf(1)
        q = _mp(self.get("q"))
        if k == "negbin":
            return (q / (1 - (1 - q))) ** _mp(self.get("beta"))
        if k == "geometric_shifted":
            return q / (1 - (1 - q))
        return (1 - q + q) ** int(self.get("m"))

    def equation(self) -> BiPoly:
        """P(z, x) with x = pgf(z)."""
        k = self.kind
        if k == "negbin":
            # (1 - (1-q) z)^s x^t = q^s for beta = s/t
            beta, q = self.get("beta"), self.get("q")
            s, t = beta.numerator, beta.denominator
            base = BiPoly.from_terms({(0, 0): 1, (1, 0): -(1 - q)})
            return base**s * BiPoly.y() ** t - q**s
        if k == "geometric_shifted":
            q = self.get("q")
            return BiPoly.from_terms({(0, 1): 1, (1, 1): -(1 - q), (1, 0): -q})
        if k == "binomial":
            m, q = int(self.get("m")), self.get("q")
            return BiPoly.y() - BiPoly.from_terms({(0, 0): 1 - q, (1, 0): q}) ** m
        if k == "pmf":
            return BiPoly.y() - BiPoly.from_terms({(i, 0): c for i, c in enumerate(self.pmf) if c})
        return self.function.p

    def value_at_zero(self):
        """pgf(0) = P(X = 0), exact (Fraction or RadicalNumber) where possible."""
        k = self.kind
        if k == "negbin":
            beta, q = self.get("beta"), self.get("q")
            return radical_value(q**beta.numerator, beta.denominator, 1)
        if k == "geometric_shifted":
            return Fraction(0)
        if k == "binomial":
            return (1 - self.get("q")) ** int(self.get("m"))
        if k == "pmf":
            return self.pmf[0]
        return self.function.y0

    def algebraic_function(self) -> AlgebraicFunction:
        if self.kind == "algebraic":
            return self.function
        return AlgebraicFunction(self.equation(), self.value_at_zero())

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        out.update({k: str(as_fraction(v)) for k, v in sorted(self.params.items())})
        if self.kind == "pmf":
            out["pmf"] = [str(c) for c in self.pmf]
        if self.kind == "algebraic":
            out["equation"] = self.function.p.canonical().to_json()
            out["y0"] = _branch_json(self.function.y0)
        return out


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _branch_json(y0):
    if isinstance(y0, Fraction):
        return str(y0)
    with mpmath.workdps(40):
        v = y0.to_mpf() if hasattr(y0, "to_mpf") else mpmath.mpmathify(y0)
        return mpmath.nstr(v, 40)


@dataclass(frozen=True)
class CompoundModel:
    """L = X_1 + ... + X_N with pgf phi_N(phi_X(z))."""

    claim_number: ClaimNumberSpec
    claim_size: ClaimSizeSpec

    def to_json(self) -> dict:
        return {"claim_number": self.claim_number.to_json(), "claim_size": self.claim_size.to_json()}

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def family(self) -> Optional[str]:
        """Name of the closed-form asymptotic family this model belongs to, if any."""
        n, x = self.claim_number.kind, self.claim_size.kind
        if n == "negbin" and x == "negbin":
            return "negbin_negbin"
        if n == "mixed_poisson_gig" and x == "geometric_shifted":
            return "gig_geometric"
        if n == "poisson" and x == "negbin" and self.claim_size.get("beta") == Fraction(1, 2):
            return "poisson_negbin_half"
        return None


def degenerate_unit_claims() -> ClaimSizeSpec:
    """X identically 1 (pgf z)."""
    return ClaimSizeSpec.from_pmf([0, 1])


def bessel_ode(theta: Fraction) -> LinearODE:
    """x^2 K'' + x K' - (x^2 + theta^2) K = 0."""
    return LinearODE([Poly([-theta * theta, 0, -1]), Poly([0, 1]), Poly([0, 0, 1])])
