"""Forward evaluation of a recurrence in double, high-precision, or exact-normalized mode."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numba
import numpy as np

from ..algebra import Poly, RadicalNumber, complex_roots_numeric, rational_roots
from ..dfinite import PRecurrence
from ..series import mpf_str, to_mpf

MODES = ("double", "highprec", "exact_normalized")


@numba.njit(cache=True, inline="always")
def _two_prod(a, b):  # pragma: no cover - compiled
    # Dekker/Veltkamp splitting: p + err == a * b exactly
    p = a * b
    f = 134217729.0
    t = f * a
    ah = t - (t - a)
    al = a - ah
    t = f * b
    bh = t - (t - b)
    bl = b - bh
    err = al * bl - (((p - ah * bh) - al * bh) - ah * bl)
    return p, err


@numba.njit(cache=True)
def _forward_double(coef, mant, expo, start, n):  # pragma: no cover - compiled
    """a_i = m_i 2^(x_i); each step rescales the window to its largest exponent.

    The dot product sum_k R_k(n) a_(n+k) is accumulated with error-free
    transformations (compensated dot product), so only the stored values
    carry rounding error.
    """
    e = coef.shape[0] - 1
    deg = coef.shape[1] - 1
    for i in range(start, n + 1):
        t = float(i - e)
        base = np.int64(0)
        seen = False
        for k in range(e):
            if mant[i - e + k] != 0.0 and (not seen or expo[i - e + k] > base):
                base = expo[i - e + k]
                seen = True
        s = 0.0
        comp = 0.0
        for k in range(e):
            r = coef[k, deg]
            for j in range(deg - 1, -1, -1):
                r = r * t + coef[k, j]
            if r != 0.0 and mant[i - e + k] != 0.0:
                p, perr = _two_prod(r, math.ldexp(mant[i - e + k], expo[i - e + k] - base))
                # two-sum of s and p
                x = s + p
                z = x - s
                serr = (s - (x - z)) + (p - z)
                s = x
                comp += perr + serr
        lead = coef[e, deg]
        for j in range(deg - 1, -1, -1):
            lead = lead * t + coef[e, j]
        if lead == 0.0:
            return i
        v = -(s + comp) / lead
        if not math.isfinite(v):
            return -i
        m, x2 = math.frexp(v)
        mant[i] = m
        expo[i] = x2 + base
    return 0


@numba.njit(cache=True)
def _forward_difference(T, state, n0, start, n, out_m, out_e, low_m, low_e, high_m, high_e, block):  # pragma: no cover
    """Difference-form evaluation of a tilted recurrence.

    ``state`` holds Delta^j b at index n0 (j < e) where b_k = a_k / rho^k and
    sum_j T_j(k) Delta^j b_k = 0. Each step solves for Delta^e b_k and
    advances all differences by additions. Output a_k = b_k rho^k is written
    as mantissa/exponent using precomputed powers of rho.
    """
    e = T.shape[0] - 1
    deg = T.shape[1] - 1
    scale = np.int64(0)
    for k in range(n0, n):
        t = float(k)
        s = 0.0
        comp = 0.0
        for j in range(e):
            r = T[j, deg]
            for i in range(deg - 1, -1, -1):
                r = r * t + T[j, i]
            if r != 0.0 and state[j] != 0.0:
                p, perr = _two_prod(r, state[j])
                x = s + p
                z = x - s
                serr = (s - (x - z)) + (p - z)
                s = x
                comp += perr + serr
        lead = T[e, deg]
        for i in range(deg - 1, -1, -1):
            lead = lead * t + T[e, i]
        if lead == 0.0:
            return k + e
        top = -(s + comp) / lead
        for j in range(e - 1):
            state[j] = state[j] + state[j + 1]
        state[e - 1] = state[e - 1] + top
        big = 0.0
        for j in range(e):
            if abs(state[j]) > big:
                big = abs(state[j])
        if not math.isfinite(big):
            return -(k + 1)
        if big > 1e150 or (big < 1e-150 and big != 0.0):
            _, sh = math.frexp(big)
            for j in range(e):
                state[j] = math.ldexp(state[j], -sh)
            scale += sh
        idx = k + 1
        if idx < start:
            continue
        m, x = math.frexp(state[0] * low_m[idx % block] * high_m[idx // block])
        out_m[idx] = m
        out_e[idx] = x + scale + low_e[idx % block] + high_e[idx // block]
    return 0


class EvaluationError(ArithmeticError):
    pass


@lru_cache(maxsize=64)
def _coef_matrix(rec: PRecurrence) -> np.ndarray:
    deg = max(p.degree for p in rec.coeffs if p)
    M = np.zeros((rec.order + 1, max(deg, 0) + 1))
    for k, p in enumerate(rec.coeffs):
        for j, c in enumerate(p.coeffs):
            M[k, j] = float(c)
    M.setflags(write=False)
    return M


@dataclass
class DistTable:
    """Values a_0..a_n of a computed distribution.

    In double mode the values are stored as mantissa * 2**exponent so that
    far tails do not underflow. In exact-normalized mode ``values`` holds
    a_k / a_0 and ``scale`` the numeric a_0 (when known).
    """

    mode: str
    n: int
    fingerprint: str = ""
    digits: int = 17
    values: list = field(default_factory=list)
    mantissa: Optional[np.ndarray] = None
    exponent: Optional[np.ndarray] = None
    scale: object = None

    def __len__(self) -> int:
        return self.n + 1

    def as_float(self) -> np.ndarray:
        """Values as float64 (underflowing to 0 far in the tail)."""
        if self.mode == "double":
            return np.ldexp(self.mantissa, self.exponent)
        with mpmath.workdps(30):
            return np.array([float(self.value(k)) for k in range(self.n + 1)])

    def value(self, k: int):
        """Value k as an mpf (exact-normalized tables are rescaled by ``scale`` when set)."""
        if self.mode == "double":
            return mpmath.ldexp(mpmath.mpf(float(self.mantissa[k])), int(self.exponent[k]))
        v = self.values[k]
        if self.mode == "exact_normalized":
            v = to_mpf(v)
            return v * self.scale if self.scale is not None else v
        return v

    def log_value(self, k: int) -> float:
        if self.mode == "double":
            m = float(self.mantissa[k])
            return math.log(m) + float(self.exponent[k]) * math.log(2) if m > 0 else -math.inf
        with mpmath.workdps(max(self.digits, 20)):
            return float(mpmath.log(self.value(k)))

    def numeric_values(self, digits: Optional[int] = None) -> list:
        with mpmath.workdps(digits or max(self.digits, 17)):
            return [self.value(k) for k in range(self.n + 1)]

    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.as_float())

    def to_csv(self, digits: Optional[int] = None) -> str:
        digits = digits or self.digits
        lines = ["n,a_n"]
        if self.mode == "exact_normalized" and self.scale is None:
            for k, v in enumerate(self.values):
                lines.append(f"{k},{_exact_str(v, digits)}")
        elif self.mode == "double":
            vals = self.as_float()
            for k in range(self.n + 1):
                v = float(vals[k])
                if v != 0.0 or self.mantissa[k] == 0.0:
                    lines.append(f"{k},{v:.17g}")
                else:
                    with mpmath.workdps(20):
                        lines.append(f"{k},{mpmath.nstr(self.value(k), 17)}")
        else:
            with mpmath.workdps(digits + 5):
                for k in range(self.n + 1):
                    lines.append(f"{k},{mpf_str(self.value(k), digits)}")
        return "\n".join(lines) + "\n"


def _exact_str(v, digits: int) -> str:
    if isinstance(v, Fraction):
        return str(v)
    with mpmath.workdps(digits + 5):
        return mpf_str(to_mpf(v), digits)


def _mant_exp(x) -> tuple[float, int]:
    m, e = mpmath.frexp(x)
    return float(m), int(e)


def eval_distribution(rec: PRecurrence, initial: Sequence, n: int, mode: str = "double",
                      digits: int = 30, fingerprint: str = "", scale=None) -> DistTable:
    """Run the recurrence forward from ``initial`` up to index n.

    The caller guarantees that the leading coefficient R_e(k) is nonzero
    for every k >= len(initial) - e.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    e = rec.order
    c = len(initial)
    if c < e:
        raise ValueError(f"need at least {e} initial values")
    if mode == "double":
        return _eval_double(rec, initial, n, fingerprint)
    if mode == "highprec":
        # ten guard digits absorb the (polynomial) error growth of the recursion
        with mpmath.workdps(digits + 10):
            vals = [to_mpf(v) for v in initial[: n + 1]]
            coeffs = [[int(x) if x.denominator == 1 else x for x in p.coeffs] for p in rec.coeffs]
            _forward_generic(coeffs, vals, c, n, e, mpmath.mpf)
        with mpmath.workdps(digits):
            vals = [+v for v in vals]
        return DistTable("highprec", n, fingerprint, digits, vals)
    if not all(isinstance(v, (int, Fraction, RadicalNumber)) for v in initial):
        raise ValueError("exact_normalized mode needs exact initial values")
    vals = list(initial[: n + 1])
    coeffs = [list(p.coeffs) for p in rec.coeffs]
    _forward_generic(coeffs, vals, c, n, e, None)
    return DistTable("exact_normalized", n, fingerprint, digits, vals, scale=scale)


def _poly_at(cs, t):
    r = 0
    for x in reversed(cs):
        r = r * t + x
    return r


def _forward_generic(coeffs, vals, start, n, e, conv):
    for i in range(start, n + 1):
        t = i - e
        acc = 0
        for k in range(e):
            r = _poly_at(coeffs[k], t)
            if r:
                acc = acc + vals[t + k] * r
        lead = _poly_at(coeffs[e], t)
        if lead == 0:
            raise EvaluationError(f"leading coefficient vanishes at n = {t}: not enough initial values")
        vals.append(-acc / lead if conv is None else -acc / conv(lead))


@lru_cache(maxsize=64)
def dominant_rational_root(rec: PRecurrence) -> Optional[Fraction]:
    """The dominant characteristic root when it is a positive rational of unique modulus.

    With a_n = x^n the top-degree terms give chi(x) = sum_k lc_d(R_k) x^k.
    Other characteristic roots close to the dominant one (or the dominant
    root repeated) make the windowed plain recurrence ill-conditioned:
    rounding leaks into the dominant solution with a factor growing
    polynomially in n. The difference form in the tilted sequence a_n / rho^n
    keeps the error flat.
    """
    d = max(p.degree for p in rec.coeffs)
    chi = Poly([p[d] if p.degree >= d else 0 for p in rec.coeffs])
    if chi.degree < 1:
        return None
    with mpmath.workdps(30):
        roots = complex_roots_numeric(chi, 20)
        top = max(abs(v) for v, _ in roots)
        near = [v for v, _ in roots if abs(abs(v) - top) < mpmath.mpf(10) ** -12 * max(top, 1)]
    if len(near) != 1:
        return None
    for r, _ in rational_roots(chi):
        if r > 0 and abs(to_mpf(r) - near[0]) < mpmath.mpf(10) ** -12:
            return r
    return None


@lru_cache(maxsize=16)
def _low_powers(rho: Fraction, block: int):
    low_m, low_e = np.zeros(block), np.zeros(block, dtype=np.int64)
    with mpmath.workdps(30):
        r = to_mpf(rho)
        for j in range(block):
            low_m[j], low_e[j] = _mant_exp(r**j)
    return low_m, low_e


def _power_tables(rho: Fraction, n: int, block: int = 1024):
    """rho^k = low[k % block] * high[k // block], each as mantissa and exponent."""
    nb = n // block + 1
    low_m, low_e = _low_powers(rho, block)
    high_m, high_e = np.zeros(nb), np.zeros(nb, dtype=np.int64)
    with mpmath.workdps(30):
        rb = to_mpf(rho) ** block
        cur = mpmath.mpf(1)
        for k in range(nb):
            high_m[k], high_e[k] = _mant_exp(cur)
            cur *= rb
    return low_m, low_e.copy(), high_m, high_e, block


@lru_cache(maxsize=64)
def _difference_matrix(rec: PRecurrence, rho: Fraction) -> np.ndarray:
    """Coefficients of T_j = sum_{k >= j} C(k, j) R_k rho^k as a float matrix."""
    e = rec.order
    S = [p * rho**k for k, p in enumerate(rec.coeffs)]
    T = [sum((S[k] * comb(k, j) for k in range(j, e + 1)), Poly()) for j in range(e + 1)]
    deg = max(t.degree for t in T)
    Tm = np.zeros((e + 1, max(deg, 0) + 1))
    for j, t in enumerate(T):
        for i, x in enumerate(t.coeffs):
            Tm[j, i] = float(x)
    Tm.setflags(write=False)
    return Tm


def _eval_difference(rec: PRecurrence, rho: Fraction, mant, expo, initial, n: int) -> int:
    e, c = rec.order, len(initial)
    Tm = _difference_matrix(rec, rho)
    n0 = c - e
    with mpmath.workdps(40):
        r = to_mpf(rho)
        b = [to_mpf(initial[n0 + i]) / r ** (n0 + i) for i in range(e)]
        diffs = [sum((-1) ** (j - i) * comb(j, i) * b[i] for i in range(j + 1)) for j in range(e)]
        _, sh = mpmath.frexp(max(abs(x) for x in diffs) or 1)
        state = np.array([float(mpmath.ldexp(x, -int(sh))) for x in diffs])
    low_m, low_e, high_m, high_e, block = _power_tables(rho, n)
    low_e = low_e + int(sh)
    return _forward_difference(Tm, state, n0, c, n, mant, expo, low_m, low_e, high_m, high_e, block)


def _eval_double(rec: PRecurrence, initial: Sequence, n: int, fingerprint: str) -> DistTable:
    c = len(initial)
    mant = np.zeros(max(n + 1, c))
    expo = np.zeros(max(n + 1, c), dtype=np.int64)
    with mpmath.workdps(30):
        for i, v in enumerate(initial):
            mant[i], expo[i] = _mant_exp(to_mpf(v))
    status = 0
    if n >= c:
        rho = dominant_rational_root(rec)
        if rho is not None:
            status = _eval_difference(rec, rho, mant, expo, initial, n)
        else:
            status = _forward_double(_coef_matrix(rec), mant, expo, c, n)
    if status > 0:
        raise EvaluationError(f"leading coefficient vanishes at index {status}: not enough initial values")
    if status < 0:
        raise EvaluationError(f"non-finite value at index {-status} in double mode; use highprec mode")
    return DistTable("double", n, fingerprint, 17, [], mant[: n + 1], expo[: n + 1])
