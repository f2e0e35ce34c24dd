"""Print |a_n / estimate - 1| for the three closed-form asymptotic families."""

import argparse
import time
from fractions import Fraction as F

from aggrec.risk import (
    ClaimNumberSpec,
    ClaimSizeSpec,
    CompoundModel,
    asymptotic_for_model,
    derive_recurrence,
    eval_distribution,
    ratio_deviation,
)

MODELS = {
    "negbin-negbin (p=q=1/2)": CompoundModel(ClaimNumberSpec.negbin(F(1, 2), F(1, 2)),
                                             ClaimSizeSpec.negbin(F(1, 3), F(1, 2))),
    "negbin-negbin (q=1/3)": CompoundModel(ClaimNumberSpec.negbin(F(1, 2), F(1, 2)),
                                           ClaimSizeSpec.negbin(F(1, 3), F(1, 3))),
    "gig-geometric": CompoundModel(ClaimNumberSpec.gig(1, 2, F(2, 3)), ClaimSizeSpec.geometric_shifted(F(1, 2))),
    "poisson-negbin": CompoundModel(ClaimNumberSpec.poisson(1), ClaimSizeSpec.negbin(F(1, 2), F(1, 2))),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-exp", type=int, default=6, help="largest n is 10**max_exp")
    args = ap.parse_args()
    ns = [10**k for k in range(3, args.max_exp + 1)]
    print("model," + ",".join(f"n=1e{k}" for k in range(3, args.max_exp + 1)) + ",seconds")
    for name, model in MODELS.items():
        est = asymptotic_for_model(model)
        b = derive_recurrence(model, 30, exact=False)
        t0 = time.perf_counter()
        table = eval_distribution(b.recurrence, b.initial_numeric, ns[-1], "double")
        dt = time.perf_counter() - t0
        devs = [ratio_deviation(est, n, table.log_value(n)) for n in ns]
        print(f"{name}," + ",".join(f"{d:.3e}" for d in devs) + f",{dt:.3f}")


if __name__ == "__main__":
    main()
