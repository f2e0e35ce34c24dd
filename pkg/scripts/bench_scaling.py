"""Recurrence evaluation time against n, with the convolution baseline.

Wall-clock and process CPU times are both reported; on shared hosts the two
can differ noticeably.
"""

import argparse
import gc
import time
from fractions import Fraction as F

from aggrec.risk import (
    ClaimNumberSpec,
    ClaimSizeSpec,
    CompoundModel,
    derive_recurrence,
    eval_distribution,
    oracle_convolution,
)


def best(fn, repeats):
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


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--conv", type=str, default="5000,10000,20000")
    args = ap.parse_args()
    model = CompoundModel(ClaimNumberSpec.negbin(F(1, 2), F(1, 2)), ClaimSizeSpec.negbin(F(1, 3), F(1, 3)))
    b = derive_recurrence(model, 30, exact=False)
    eval_distribution(b.recurrence, b.initial_numeric, 1000, "double")
    print(f"recurrence order {b.order}")
    print("task,n,wall_s,cpu_s,cpu_ns_per_term")
    for n in (10**4, 10**5, 3 * 10**5, 10**6, 3 * 10**6):
        w, c = best(lambda: eval_distribution(b.recurrence, b.initial_numeric, n, "double"), args.repeats)
        print(f"recurrence,{n},{w:.4f},{c:.4f},{1e9 * c / n:.1f}")
    for n in (int(x) for x in args.conv.split(",")):
        w, c = best(lambda: oracle_convolution(model, n, mode="double"), 1)
        print(f"convolution,{n},{w:.4f},{c:.4f},{1e9 * c / n:.1f}")


if __name__ == "__main__":
    main()
