"""Acceptance criteria 1-9.

Run under pytest (a summary line per criterion is printed at the end) or
directly with ``python tests/test_acceptance.py``.
"""

import gc
import sys
import time
from fractions import Fraction as F

import mpmath
import numpy as np

from aggrec.algebra import Poly
from aggrec.dfinite import LinearODE, PRecurrence
from aggrec.risk import (
    ClaimNumberSpec,
    ClaimSizeSpec,
    CompoundModel,
    annihilation_residual,
    asymptotic_for_model,
    build_pgf_ode,
    derive_recurrence,
    eval_distribution,
    oracle_convolution,
    panjer_for_model,
    ratio_deviation,
    stability_report,
)

from conftest import gig_geometric, negbin_negbin, poisson_negbin, record


def golden_ode(lam, p):
    u = Poly([1, -(1 - p)])  # 1 - (1-p) z
    return LinearODE([Poly([lam**2 * p * (1 - p) ** 2]), u**2 * (6 * (1 - p)), u**3 * -4])


def golden_recurrence(lam, p):
    return PRecurrence([
        Poly([0, 2, 4]) * (1 - p) ** 3,                          # 2n(2n+1)(1-p)^3
        Poly([12 - lam**2 * p, 24, 12]) * -(1 - p) ** 2,         # -(1-p)^2(-lam^2 p + 12n^2 + 24n + 12)
        Poly([36, 42, 12]) * (1 - p),                            # 6(n+2)(2n+3)(1-p)
        Poly([-24, -20, -4]),                                    # -4(n+2)(n+3)
    ])


def criterion_1():
    t0 = time.perf_counter()
    ok = True
    for lam, p in ((F(1), F(1, 2)), (F(2), F(1, 3))):
        m = poisson_negbin(lam, p)
        ok &= build_pgf_ode(m) == golden_ode(lam, p)
        ok &= derive_recurrence(m, 30, exact=False).recurrence == golden_recurrence(lam, p)
    dt = time.perf_counter() - t0
    return ok and dt < 5, f"operators equal after canonicalization: {ok}; {dt:.2f} s"


def criterion_2():
    t0 = time.perf_counter()
    r1 = stability_report(negbin_negbin()).indicial
    r2 = stability_report(gig_geometric()).indicial
    s1, s2 = r1.root_set(), r2.root_set()
    ok = (s1 == {F(0), F(1), F(2), F(-1, 2)} and not r1.numeric_roots
          and s2 == {F(0), F(1), F(2), F(-2, 3)} and not r2.numeric_roots)
    dt = time.perf_counter() - t0
    fmt = lambda s: "{" + ", ".join(str(x) for x in sorted(s)) + "}"
    return ok and dt < 30, f"example 1 at {r1.singularity}: {fmt(s1)}; example 2 at {r2.singularity}: {fmt(s2)}; {dt:.2f} s"


def criterion_3():
    t0 = time.perf_counter()
    worst = 0.0
    for make in (negbin_negbin, gig_geometric, poisson_negbin):
        m = make()
        b = derive_recurrence(m, 30, exact=False)
        conv = oracle_convolution(m, 199, 30)
        worst = max(worst, float(annihilation_residual(b.recurrence, conv.values, 30)))
    m = poisson_negbin()
    b = derive_recurrence(m, 30)
    pan = panjer_for_model(m, 499, "exact_normalized")
    rec = eval_distribution(b.recurrence, b.initial_exact, 499, "exact_normalized")
    exact_res = annihilation_residual(b.recurrence, pan.values)
    exact_ok = exact_res == 0 and rec.values == pan.values
    dt = time.perf_counter() - t0
    ok = worst < 1e-25 and exact_ok and dt < 60
    return ok, f"max relative residual {worst:.2e} on 200 terms; exact residual {exact_res} on 500 terms; {dt:.1f} s"


def criterion_4():
    t0 = time.perf_counter()
    errs = {}
    for name, make in (("ex1", negbin_negbin), ("ex2", gig_geometric), ("ex3", poisson_negbin)):
        m = make()
        b30 = derive_recurrence(m, 30, exact=False)
        b40 = derive_recurrence(m, 40, exact=False)
        n = 10**4
        d = eval_distribution(b30.recurrence, b30.initial_numeric, n, "double")
        h = eval_distribution(b40.recurrence, b40.initial_numeric, n, "highprec", 40)
        with mpmath.workdps(40):
            errs[name] = float(max(abs(d.value(k) - h.values[k]) / h.values[k] for k in range(n + 1)))
    dt = time.perf_counter() - t0
    ok = errs["ex1"] < 1e-10 and errs["ex3"] < 1e-10 and errs["ex2"] < 1e-8 and dt < 10
    return ok, ", ".join(f"{k} {v:.1e}" for k, v in errs.items()) + f"; {dt:.2f} s"


def _ratio_series(model, ns):
    est = asymptotic_for_model(model)
    b = derive_recurrence(model, 30, exact=False)
    t0 = time.perf_counter()
    t = eval_distribution(b.recurrence, b.initial_numeric, max(ns), "double")
    dt = time.perf_counter() - t0
    return [ratio_deviation(est, n, t.log_value(n)) for n in ns], dt


def _decreasing(xs):
    return all(a > b for a, b in zip(xs, xs[1:]))


def criterion_5():
    ns = [10**3, 10**4, 10**5]
    d1, t1 = _ratio_series(negbin_negbin(q=F(1, 2)), ns)
    d2, t2 = _ratio_series(gig_geometric(), ns)
    ok = _decreasing(d1) and d1[-1] < 1e-2 and _decreasing(d2) and d2[-1] < 2e-2 and t1 < 5 and t2 < 5
    fmt = lambda ds: "/".join(f"{x:.1e}" for x in ds)
    return ok, f"negbin-negbin {fmt(d1)}; gig {fmt(d2)} at n=1e3/1e4/1e5"


def criterion_6():
    ns = [10**3, 10**4, 10**5, 10**6]
    d, dt = _ratio_series(poisson_negbin(), ns)
    ok = _decreasing(d) and d[-1] < 0.2 and dt < 5
    return ok, "deviations " + "/".join(f"{x:.2e}" for x in d) + f"; final {d[-1]:.2e}; {dt:.2f} s"


def criterion_7():
    m = CompoundModel(ClaimNumberSpec.poisson(F(3, 2)), ClaimSizeSpec.from_pmf([0, F(1, 2), F(1, 2)]))
    t0 = time.perf_counter()
    pan = panjer_for_model(m, 300, "exact_normalized")
    conv = oracle_convolution(m, 300, mode="exact_normalized")
    dt = time.perf_counter() - t0
    same = pan.values == conv.values and all(isinstance(v, F) for v in pan.values)
    return same and dt < 5, f"301 identical rationals: {same}; {dt:.2f} s"


def _best(fn, repeats):
    """Smallest wall-clock and process CPU time over ``repeats`` runs (GC paused, as timeit does)."""
    wall = cpu = float("inf")
    gc.collect()
    gc.disable()
    try:
        for _ in range(repeats):
            w, c = time.perf_counter(), time.process_time()
            fn()
            cpu = min(cpu, time.process_time() - c)
            wall = min(wall, time.perf_counter() - w)
    finally:
        gc.enable()
    return wall, cpu


def criterion_8():
    m = negbin_negbin()
    b = derive_recurrence(m, 30, exact=False)
    assert b.order == 4
    run = lambda n: eval_distribution(b.recurrence, b.initial_numeric, n, "double")
    run(1000)  # compile
    w5, c5 = _best(lambda: run(10**5), 9)
    w6, c6 = _best(lambda: run(10**6), 7)
    # the linearity check uses CPU time: on a shared host, wall time also counts
    # periods where the virtual CPU was descheduled
    scale = c6 / (10 * c5)
    wc, _ = _best(lambda: oracle_convolution(m, 2 * 10**4, mode="double"), 2)
    ok = w6 < 0.5 and 1 / 1.3 <= scale <= 1.3 and wc > w6
    return ok, (f"t(1e6) {w6:.3f} s wall; CPU-time ratio t(1e6)/(10 t(1e5)) {scale:.2f} "
                f"(wall {w6 / (10 * w5):.2f}); convolution at 2e4 {wc:.3f} s")


def criterion_9():
    n = 10**4
    worst_neg, worst_total, min_total = 0.0, 0.0, 2.0
    ok = True
    for make in (negbin_negbin, gig_geometric, poisson_negbin, lambda: negbin_negbin(q=F(1, 2))):
        b = derive_recurrence(make(), 30, exact=False)
        t = eval_distribution(b.recurrence, b.initial_numeric, n, "double")
        v = t.as_float()
        s = t.partial_sums()
        ok &= bool(v.min() >= -1e-12 and np.all(s > 0) and s.max() <= 1 + 1e-12 and s[-1] > 0.999)
        worst_neg = min(worst_neg, float(v.min()))
        worst_total = max(worst_total, float(s.max()))
        min_total = min(min_total, float(s[-1]))
    return ok, f"min a_k {worst_neg:.1e}; max partial sum {worst_total:.15f}; min mass at 1e4 {min_total:.6f}"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 10)}


def _run(k):
    ok, detail = CRITERIA[k]()
    record(k, ok, detail)
    assert ok, detail


def test_criterion_1_golden_operators():
    _run(1)


def test_criterion_2_indicial_roots():
    _run(2)


def test_criterion_3_oracle_annihilation():
    _run(3)


def test_criterion_4_double_vs_high_precision():
    _run(4)


def test_criterion_5_asymptotic_ratios():
    _run(5)


def test_criterion_6_stretched_exponential_ratio():
    _run(6)


def test_criterion_7_panjer_convolution_exact():
    _run(7)


def test_criterion_8_linear_time():
    _run(8)


def test_criterion_9_mass_and_positivity():
    _run(9)


if __name__ == "__main__":
    failures = 0
    for k, fn in CRITERIA.items():
        ok, detail = fn()
        failures += not ok
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
    sys.exit(1 if failures else 0)
