from fractions import Fraction as F
from math import factorial

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aggrec.risk import (
    ClaimNumberSpec,
    ClaimSizeSpec,
    CompoundModel,
    ModelError,
    annihilation_residual,
    asymptotic_gig,
    asymptotic_negbin_negbin,
    asymptotic_poisson_negbin,
    degenerate_unit_claims,
    derive_recurrence,
    eval_distribution,
    oracle_convolution,
    panjer_for_model,
    panjer_recursion,
    stability_report,
)
from aggrec.series import bessel_k

from conftest import gig_geometric, negbin_negbin


def mp(x):
    return mpmath.mpf(x.numerator) / x.denominator


def max_rel(a, b):
    return max(abs(x - y) / abs(y) if y else abs(x - y) for x, y in zip(a, b))


# -- model validation --------------------------------------------------------

@pytest.mark.parametrize("build", [
    lambda: ClaimNumberSpec.poisson(0),
    lambda: ClaimNumberSpec.negbin(F(1, 2), 1),
    lambda: ClaimNumberSpec.negbin(F(1, 13), F(1, 2)),
    lambda: ClaimNumberSpec.gig(1, 2, 1),
    lambda: ClaimSizeSpec.from_pmf([F(1, 2), F(1, 3)]),
    lambda: ClaimSizeSpec.from_pmf([1]),
    lambda: ClaimSizeSpec.geometric_shifted(0),
    lambda: ClaimNumberSpec("weibull", {}),
])
def test_invalid_parameters_rejected(build):
    with pytest.raises(ModelError):
        build()


def test_fingerprint_is_stable():
    assert negbin_negbin().fingerprint() == negbin_negbin().fingerprint()
    assert negbin_negbin().fingerprint() != negbin_negbin(q=F(1, 4)).fingerprint()


# -- pipeline ----------------------------------------------------------------

def test_unit_claims_reproduce_poisson_pmf():
    lam = F(3, 2)
    model = CompoundModel(ClaimNumberSpec.poisson(lam), degenerate_unit_claims())
    b = derive_recurrence(model, 30)
    exact = eval_distribution(b.recurrence, b.initial_exact, 60, "exact_normalized")
    assert exact.values == [lam**k / factorial(k) for k in range(61)]
    hp = eval_distribution(b.recurrence, b.initial_numeric, 60, "highprec", 30)
    with mpmath.workdps(40):
        ref = [mpmath.exp(-mp(lam)) * mp(lam) ** k / mpmath.factorial(k) for k in range(61)]
        assert max_rel(hp.values, ref) < mpmath.mpf(10) ** -28


def test_unit_claims_reproduce_negbin_pmf():
    model = CompoundModel(ClaimNumberSpec.negbin(2, F(1, 3)), degenerate_unit_claims())
    b = derive_recurrence(model, 30)
    t = eval_distribution(b.recurrence, b.initial_numeric, 40, "highprec", 30)
    with mpmath.workdps(40):
        ref = [(k + 1) * mpmath.mpf(1) / 9 * (mpmath.mpf(2) / 3) ** k for k in range(41)]
        assert max_rel(t.values, ref) < mpmath.mpf(10) ** -28


def test_poisson_geometric_mass_at_zero():
    model = CompoundModel(ClaimNumberSpec.poisson(1), ClaimSizeSpec.geometric_shifted(F(1, 2)))
    b = derive_recurrence(model, 30)
    with mpmath.workdps(30):
        assert abs(b.initial_numeric[0] - mpmath.exp(-1)) < mpmath.mpf(10) ** -29


def test_panjer_negbin_geometric_against_convolution():
    model = CompoundModel(ClaimNumberSpec.negbin(2, F(1, 2)), ClaimSizeSpec.geometric_shifted(F(1, 2)))
    n = 150
    pan = panjer_for_model(model, n, "highprec", 30)
    conv = oracle_convolution(model, n, 30)
    with mpmath.workdps(40):
        assert max_rel(pan.values, conv.values) < mpmath.mpf(10) ** -25


def test_panjer_rejects_degenerate_claims():
    with pytest.raises(ModelError):
        panjer_recursion(ClaimNumberSpec.poisson(1), [F(1)], 5)


@pytest.mark.parametrize("make", [negbin_negbin, gig_geometric])
def test_recurrence_matches_oracle_and_annihilates(make):
    model = make()
    b = derive_recurrence(model, 30, exact=False)
    n = 120
    rec = eval_distribution(b.recurrence, b.initial_numeric, n, "highprec", 30)
    conv = oracle_convolution(model, n, 30)
    with mpmath.workdps(40):
        assert max_rel(rec.values, conv.values) < mpmath.mpf(10) ** -28
    assert annihilation_residual(b.recurrence, conv.values, 30) < 1e-28


def test_annihilation_residual_detects_corruption(example1):
    b = derive_recurrence(example1, 30, exact=False)
    conv = oracle_convolution(example1, 60, 30)
    vals = list(conv.values)
    vals[30] = vals[30] * (1 + mpmath.mpf(10) ** -10)
    assert annihilation_residual(b.recurrence, vals, 30) > 1e-12


small_pmf = st.lists(st.integers(0, 4), min_size=2, max_size=4).filter(lambda v: sum(v[1:]) > 0)


@settings(max_examples=15)
@given(st.fractions(min_value=F(1, 4), max_value=3, max_denominator=4), small_pmf)
def test_exact_panjer_equals_exact_recurrence(lam, weights):
    pmf = [F(w, sum(weights)) for w in weights]
    model = CompoundModel(ClaimNumberSpec.poisson(lam), ClaimSizeSpec.from_pmf(pmf))
    b = derive_recurrence(model, 30)
    n = 40
    rec = eval_distribution(b.recurrence, b.initial_exact, n, "exact_normalized")
    pan = panjer_for_model(model, n, "exact_normalized")
    assert rec.values == pan.values
    assert annihilation_residual(b.recurrence, pan.values) == 0


@pytest.mark.parametrize("make", [negbin_negbin, gig_geometric])
def test_double_tables_are_nonnegative_with_bounded_mass(make):
    b = derive_recurrence(make(), 30, exact=False)
    t = eval_distribution(b.recurrence, b.initial_numeric, 3000, "double")
    v = t.as_float()
    assert v.min() >= -1e-12
    s = t.partial_sums()
    assert np.all(np.diff(s) >= -1e-12) and s[-1] <= 1 + 1e-12


# -- asymptotics -------------------------------------------------------------

def test_negbin_negbin_singularity():
    assert asymptotic_negbin_negbin(F(1, 2), F(1, 3), F(1, 2), F(1, 2)).z1 == F(15, 8)
    assert asymptotic_negbin_negbin(F(1, 2), F(1, 3), F(1, 2), F(1, 3)).z1 == F(23, 16)


@given(st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10),
       st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10))
def test_negbin_negbin_beta_one_reduction(p, q):
    est = asymptotic_negbin_negbin(F(1, 2), 1, p, q)
    assert est.z1 == (1 - q * (1 - p)) / (1 - q)


def test_gig_constants():
    est = asymptotic_gig(1, 2, F(2, 3), F(1, 2))
    assert est.z1 == F(6, 5)
    assert est.D == F(15, 2)
    assert est.exponent == F(2, 3) - 1
    with mpmath.workdps(40):
        k = bessel_k(F(2, 3), mpmath.sqrt(2), 40)
        assert abs(est.C - 1 / k) < mpmath.mpf(10) ** -25
        # K_theta(x) < Gamma(theta) 2^(theta-1) x^(-theta) for x > 0
        bound = mpmath.gamma(mpmath.mpf(2) / 3) * 2 ** (mpmath.mpf(-1) / 3) * mpmath.sqrt(2) ** (-mpmath.mpf(2) / 3)
        assert 0 < k < bound


def test_poisson_negbin_special_case():
    est = asymptotic_poisson_negbin(1, F(1, 2))
    assert est.z1 == 2 and est.exponent == F(-5, 6) and est.stretch_power == F(1, 3)
    with mpmath.workdps(30):
        for n in (10, 1000):
            closed = mpmath.exp(mpmath.mpf(3) / 2 * mpmath.cbrt(n)) / (mpmath.sqrt(6 * mpmath.pi) * 2**n
                                                                       * mpmath.mpf(n) ** (mpmath.mpf(5) / 6))
            assert abs(est.estimate(n) / (closed * mpmath.exp(-1)) - 1) < mpmath.mpf(10) ** -20


def test_stability_verdicts(example1, example2, example3):
    r1 = stability_report(example1)
    assert r1.verdict == "stable"
    assert r1.singularities == [(F(23, 16), 1)]
    assert r1.indicial.root_set() == {F(0), F(1), F(2), F(-1, 2)}
    r2 = stability_report(example2)
    assert r2.verdict == "stable"
    assert r2.indicial.root_set() == {F(0), F(1), F(2), F(-2, 3)}
    r3 = stability_report(example3)
    assert r3.verdict == "stable"
    assert r3.classification[F(2)] == "irregular-singular"
    assert r3.to_json()["format_version"] == 1


def test_stability_inconclusive_outside_catalog():
    model = CompoundModel(ClaimNumberSpec.poisson(1), ClaimSizeSpec.negbin(F(1, 3), F(1, 2)))
    assert stability_report(model).verdict == "inconclusive"


@pytest.mark.parametrize("make", [negbin_negbin, gig_geometric])
def test_double_mode_error_stays_flat(make):
    # close characteristic roots (16/23 and a triple 2/3 for the first model) make the
    # plain windowed recurrence lose accuracy polynomially; the tilted difference form does not
    model = make()
    lo = derive_recurrence(model, 30, exact=False)
    hi = derive_recurrence(model, 40, exact=False)
    n = 20000
    d = eval_distribution(lo.recurrence, lo.initial_numeric, n, "double")
    h = eval_distribution(hi.recurrence, hi.initial_numeric, n, "highprec", 40)
    with mpmath.workdps(40):
        worst = max(abs(d.value(k) - h.values[k]) / h.values[k] for k in range(0, n + 1, 7))
    assert worst < 1e-12
