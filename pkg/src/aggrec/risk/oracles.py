"""Independent reference computations: explicit convolution sums and the Panjer recursion."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import gmpy2
import mpmath
import numpy as np
from scipy.signal import fftconvolve

from ..algebra import RadicalNumber
from ..series import DEFAULT_DIGITS, mul_trunc, series_algebraic_float, to_mpf
from .evaluate import DistTable
from .models import PANJER_KINDS, ClaimNumberSpec, CompoundModel, ModelError
from .pipeline import claim_number_series_at_zero, claim_size_series, exact_normalized_available

J_MAX = 100_000


class TruncationError(RuntimeError):
    """The claim-number tail did not drop below the requested bound within J_MAX terms."""


def _to_mpfr(x):
    x = to_mpf(x)
    return gmpy2.mpfr(int(x.man)) * gmpy2.exp2(int(x.exp)) if x else gmpy2.mpfr(0)


def _from_mpfr(x):
    num, den = x.as_integer_ratio()
    return mpmath.mpf(num) / den


def _claim_number_pmf(cn: ClaimNumberSpec, model: CompoundModel, J: int, digits: int) -> list:
    """P(N = j) for j <= J as mpf values (current precision)."""
    if cn.kind in ("mixed_poisson_gig", "custom_ode"):
        return claim_number_series_at_zero(model, J, digits)
    out = []
    if cn.kind == "poisson":
        lam = to_mpf(cn.get("lambda"))
        cur = mpmath.exp(-lam)
        for j in range(J + 1):
            out.append(cur)
            cur = cur * lam / (j + 1)
    elif cn.kind == "negbin":
        alpha, p = to_mpf(cn.get("alpha")), to_mpf(cn.get("p"))
        cur = p**alpha
        for j in range(J + 1):
            out.append(cur)
            cur = cur * (alpha + j) / (j + 1) * (1 - p)
    else:
        m, p = int(cn.get("m")), to_mpf(cn.get("p"))
        for j in range(J + 1):
            out.append(mpmath.binomial(m, j) * p**j * (1 - p) ** (m - j) if j <= m else mpmath.mpf(0))
    return out


def oracle_convolution(model: CompoundModel, n: int, digits: int = DEFAULT_DIGITS,
                       mode: str = "highprec") -> DistTable:
    """a_k = sum_j P(N = j) f^{*j}_k, k <= n, with the claim-size pmf f from Newton lifting.

    When P(X = 0) = 0 the sum is finite (j <= n). Otherwise it stops once
    the claim-number tail is below 10^-(digits+5) and, for three consecutive
    j, every new term is below that bound relative to the partial sum at the
    same index; the tail bound alone is absolute and would not control the
    relative error of tiny a_k. In
    exact-normalized mode the claim count is thinned to positive claims so
    the sum is finite and every term exact.
    """
    if mode == "exact_normalized":
        return _oracle_exact(model, n)
    if mode == "double":
        return _oracle_double(model, n)
    if mode != "highprec":
        raise ValueError(f"unknown mode {mode!r}")
    eps_digits = digits + 5
    bits = int((digits + 15) * 3.33) + 16
    with mpmath.workdps(digits + 15):
        f = claim_size_series(model, n, digits + 15)
        finite = f[0] == 0
        J = n if finite else max(2 * n, 64)
        pn = _claim_number_pmf(model.claim_number, model, J, digits)
        eps = mpmath.mpf(10) ** (-eps_digits)
        ctx = gmpy2.get_context().copy()
        ctx.precision = bits
        with gmpy2.context(ctx):
            fv = np.array([_to_mpfr(x) for x in f], dtype=object)
            acc = np.array([gmpy2.mpfr(0)] * (n + 1), dtype=object)
            power = np.array([gmpy2.mpfr(1)] + [gmpy2.mpfr(0)] * n, dtype=object)
            mass = mpmath.mpf(0)
            eps_r = gmpy2.mpfr(10) ** (-eps_digits)
            quiet = 0
            j = 0
            while True:
                if j > J:
                    J = min(2 * J, J_MAX)
                    pn = _claim_number_pmf(model.claim_number, model, J, digits)
                    if j > J:
                        raise TruncationError(f"claim-number tail not below 1e-{eps_digits} after {J_MAX} terms")
                pj = pn[j]
                term = power * _to_mpfr(pj)
                acc = acc + term
                mass += pj
                if finite and j >= n:
                    break
                if not finite and 1 - mass < eps:
                    # absolute tail bound reached; also require every a_k to have settled
                    small = all(abs(t) <= eps_r * abs(a) for t, a in zip(term, acc))
                    quiet = quiet + 1 if small else 0
                    if quiet >= 3:
                        break
                power = np.convolve(power, fv)[: n + 1]
                j += 1
            vals = [_from_mpfr(x) for x in acc]
    with mpmath.workdps(digits):
        vals = [+v for v in vals]
    return DistTable("highprec", n, model.fingerprint(), digits, vals)


def _oracle_double(model: CompoundModel, n: int) -> DistTable:
    """Float64 convolution sum (timing baseline; small values may lose relative accuracy)."""
    f = series_algebraic_float(model.claim_size.algebraic_function(), n)
    with mpmath.workdps(30):
        finite = f[0] == 0
        J = n if finite else 4096
        pn = [float(x) for x in _claim_number_pmf(model.claim_number, model, min(J, 4096), 20)]
    acc = np.zeros(n + 1)
    power = np.zeros(n + 1)
    power[0] = 1.0
    mass = 0.0
    for j, pj in enumerate(pn):
        acc += pj * power
        mass += pj
        if (finite and j >= n) or (not finite and 1 - mass < 1e-17) or (pj < 1e-300 and mass > 0.5):
            break
        conv = fftconvolve(power, f) if n > 2000 else np.convolve(power, f)
        power = conv[: n + 1]
    mant, expo = np.frexp(acc)
    return DistTable("double", n, model.fingerprint(), 17, [], mant, expo.astype(np.int64))


def _thinned_weights(cn: ClaimNumberSpec, f0, n: int) -> list:
    """w_j = P(N' = j) / P(N' = 0) for the claim count N' of nonzero claims."""
    w = [Fraction(1)]
    if cn.kind == "poisson":
        mu = cn.get("lambda") * (1 - f0)
        for j in range(1, n + 1):
            w.append(w[-1] * mu / j)
    elif cn.kind == "negbin":
        alpha, p = cn.get("alpha"), cn.get("p")
        r = (1 - p) * (1 - f0) / (1 - (1 - p) * f0)
        for j in range(1, n + 1):
            w.append(w[-1] * r * (alpha + j - 1) / j)
    else:
        m, p = int(cn.get("m")), cn.get("p")
        pp = p * (1 - f0)
        odds = pp / (1 - pp)
        for j in range(1, n + 1):
            w.append(w[-1] * odds * (m - j + 1) / j if j <= m else Fraction(0))
    return w


def _trim(v: list) -> list:
    v = list(v)
    while len(v) > 1 and not v[-1]:
        v.pop()
    return v


def _oracle_exact(model: CompoundModel, n: int) -> DistTable:
    if not exact_normalized_available(model):
        raise ModelError("exact-normalized oracle needs a Panjer-class claim number and exact claim sizes")
    f = claim_size_series(model, n)
    f0 = f[0]
    g = _trim([Fraction(0)] + [x / (1 - f0) for x in f[1:]])
    w = _thinned_weights(model.claim_number, f0, n)
    acc = [Fraction(0)] * (n + 1)
    acc[0] = Fraction(1)
    power = [Fraction(1)] + [Fraction(0)] * n
    for j in range(1, n + 1):
        power = mul_trunc(power, g, n + 1)
        if w[j]:
            for k in range(j, n + 1):
                if power[k]:
                    acc[k] = acc[k] + w[j] * power[k]
    return DistTable("exact_normalized", n, model.fingerprint(), DEFAULT_DIGITS, acc)


def panjer_ab(cn: ClaimNumberSpec) -> tuple[Fraction, Fraction]:
    """(a, b) with P(N = k) = (a + b / k) P(N = k - 1)."""
    if cn.kind == "poisson":
        return Fraction(0), cn.get("lambda")
    if cn.kind == "negbin":
        p = cn.get("p")
        return 1 - p, (cn.get("alpha") - 1) * (1 - p)
    if cn.kind == "binomial":
        p, m = cn.get("p"), int(cn.get("m"))
        return -p / (1 - p), (m + 1) * p / (1 - p)
    raise ModelError(f"{cn.kind} is not in the Panjer (a, b, 0) class")


def panjer_recursion(claim_number: ClaimNumberSpec, pmf: Sequence, n: int,
                     mode: str = "highprec", digits: int = DEFAULT_DIGITS,
                     fingerprint: str = "") -> DistTable:
    """Classical (a, b, 0) recursion g_k = sum_j (a + b j / k) f_j g_{k-j} / (1 - a f_0).

    In exact-normalized mode g_0 = 1 and ``pmf`` must be exact; otherwise
    g_0 = phi_N(f_0) is evaluated at ``digits`` precision.
    """
    if claim_number.kind not in PANJER_KINDS:
        raise ModelError(f"{claim_number.kind} is not in the Panjer (a, b, 0) class")
    f = list(pmf[: n + 1])
    if f[0] == 1:
        raise ModelError("degenerate claim size (identically zero)")
    a, b = panjer_ab(claim_number)
    exact = mode == "exact_normalized"
    if exact:
        return DistTable("exact_normalized", n, fingerprint, digits, _panjer_exact(a, b, f, n))
    with mpmath.workdps(digits + 10):
        f = [to_mpf(x) for x in f]
        a_, b_ = to_mpf(a), to_mpf(b)
        g0 = _pgf_claim_number(claim_number, f[0])
        jf = [j * x for j, x in enumerate(f)]
        denom = 1 - a_ * f[0]
        g = [g0]
        nz = [j for j in range(1, len(f)) if f[j]]
        for k in range(1, n + 1):
            s1 = 0
            s2 = 0
            for j in nz:
                if j > k:
                    break
                s1 = s1 + f[j] * g[k - j]
                s2 = s2 + jf[j] * g[k - j]
            g.append((a_ * s1 + b_ * s2 / k) / denom)
        with mpmath.workdps(digits):
            g = [+x for x in g]
    return DistTable("highprec", n, fingerprint, digits, g)


def _panjer_exact(a: Fraction, b: Fraction, f: list, n: int) -> list:
    """Exact Panjer values with g_0 = 1.

    Elements of Q(alpha) are handled as coefficient vectors of gmpy2 rationals;
    this is an order of magnitude faster than Fraction-based field arithmetic.
    """
    field = next((x.field for x in f if isinstance(x, RadicalNumber)), None)
    t = field.index if field else 1
    c = gmpy2.mpq(field.radicand) if field else None

    def vec(x):
        if isinstance(x, RadicalNumber):
            return [gmpy2.mpq(v) for v in x.coeffs]
        return [gmpy2.mpq(Fraction(x))] + [gmpy2.mpq(0)] * (t - 1)

    fv = [vec(x) for x in f]
    a_, b_ = gmpy2.mpq(a), gmpy2.mpq(b)
    # 1 / (1 - a f_0) as a vector, via the field inverse
    inv = vec(1 / (1 - a * f[0]) if field is None or not isinstance(f[0], RadicalNumber)
              else (1 - a * f[0]).inverse())
    nz = [j for j in range(1, len(f)) if any(fv[j])]
    g = [vec(1)]
    for k in range(1, n + 1):
        acc = [gmpy2.mpq(0)] * t
        for j in nz:
            if j > k:
                break
            w = a_ + b_ * j / k
            fj, gk = fv[j], g[k - j]
            for i in range(t):
                if not fj[i]:
                    continue
                fi = fj[i] * w
                for l in range(t):
                    if gk[l]:
                        m = i + l
                        if m >= t:
                            acc[m - t] += fi * gk[l] * c
                        else:
                            acc[m] += fi * gk[l]
        out = [gmpy2.mpq(0)] * t
        for i in range(t):
            if acc[i]:
                for l in range(t):
                    if inv[l]:
                        m = i + l
                        if m >= t:
                            out[m - t] += acc[i] * inv[l] * c
                        else:
                            out[m] += acc[i] * inv[l]
        g.append(out)

    def back(v):
        fr = [Fraction(int(x.numerator), int(x.denominator)) for x in v]
        return RadicalNumber(field, fr) if field else fr[0]

    return [back(v) for v in g]


def _pgf_claim_number(cn: ClaimNumberSpec, x):
    if cn.kind == "poisson":
        return mpmath.exp(to_mpf(cn.get("lambda")) * (x - 1))
    if cn.kind == "negbin":
        p = to_mpf(cn.get("p"))
        return (p / (1 - (1 - p) * x)) ** to_mpf(cn.get("alpha"))
    p = to_mpf(cn.get("p"))
    return (1 - p + p * x) ** int(cn.get("m"))


def panjer_for_model(model: CompoundModel, n: int, mode: str = "highprec",
                     digits: int = DEFAULT_DIGITS) -> DistTable:
    """Panjer recursion with the claim-size pmf taken from the Newton-lifted pgf series."""
    if mode == "exact_normalized":
        f = claim_size_series(model, n)
    else:
        f = claim_size_series(model, n, digits + 10)
    return panjer_recursion(model.claim_number, f, n, mode, digits, model.fingerprint())


def annihilation_residual(rec, values: Sequence, digits: int = DEFAULT_DIGITS):
    """max_k |sum_i R_i(k) b_{k+i}| / max_i |R_i(k) b_{k+i}| over all full windows.

    Exact inputs return 0 for exact annihilation and 1 otherwise.
    """
    exact = all(isinstance(v, (int, Fraction, RadicalNumber)) for v in values)
    e = rec.order
    worst = 0
    with mpmath.workdps(digits + 10):
        vals = values if exact else [to_mpf(v) for v in values]
        for k in range(len(vals) - e):
            terms = [r(Fraction(k)) * vals[k + i] for i, r in enumerate(rec.coeffs)]
            total = sum(terms[1:], terms[0])
            if exact:
                if total:
                    return 1
                continue
            scale = max(abs(t) for t in terms)
            if scale:
                worst = max(worst, abs(total) / scale)
        return worst if exact else float(worst)
