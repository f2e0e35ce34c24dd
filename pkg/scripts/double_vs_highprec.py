"""Relative error of double-mode evaluation against a 40-digit reference, as n grows."""

import argparse
from fractions import Fraction as F

import mpmath

from aggrec.risk import (
    ClaimNumberSpec,
    ClaimSizeSpec,
    CompoundModel,
    derive_recurrence,
    eval_distribution,
)

MODELS = {
    "negbin-negbin": CompoundModel(ClaimNumberSpec.negbin(F(1, 2), F(1, 2)), ClaimSizeSpec.negbin(F(1, 3), F(1, 3))),
    "gig-geometric": CompoundModel(ClaimNumberSpec.gig(1, 2, F(2, 3)), ClaimSizeSpec.geometric_shifted(F(1, 2))),
    "poisson-negbin": CompoundModel(ClaimNumberSpec.poisson(1), ClaimSizeSpec.negbin(F(1, 2), F(1, 2))),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--digits", type=int, default=30, help="precision of the initial values for double mode")
    args = ap.parse_args()
    checkpoints = [k for k in (10, 100, 1000, 10**4, 10**5) if k <= args.n] + [args.n]
    print("model," + ",".join(f"n={k}" for k in checkpoints))
    for name, model in MODELS.items():
        lo = derive_recurrence(model, args.digits, exact=False)
        hi = derive_recurrence(model, 40, exact=False)
        d = eval_distribution(lo.recurrence, lo.initial_numeric, args.n, "double")
        h = eval_distribution(hi.recurrence, hi.initial_numeric, args.n, "highprec", 40)
        with mpmath.workdps(40):
            worst, out = mpmath.mpf(0), []
            for k in range(args.n + 1):
                worst = max(worst, abs(d.value(k) - h.values[k]) / h.values[k])
                if k in checkpoints:
                    out.append(f"{float(worst):.2e}")
        print(f"{name}," + ",".join(out))


if __name__ == "__main__":
    main()
