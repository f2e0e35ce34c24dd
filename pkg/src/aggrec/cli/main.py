"""Command-line front end: derive, eval, verify, analyze and bench.

Exit codes: 0 success, 1 verification failure, 2 model or usage error,
3 derivation or evaluation error.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from typing import Optional

import mpmath

from ..dfinite import DerivationError
from ..risk import (
    EvaluationError,
    ModelError,
    TruncationError,
    annihilation_residual,
    derive_recurrence,
    eval_distribution,
    exact_normalized_available,
    oracle_convolution,
    panjer_for_model,
    stability_report,
)
from ..risk.models import PANJER_KINDS
from .modelio import (
    FORMAT_VERSION,
    ModelFile,
    derivation_to_json,
    dumps_canonical,
    load_derivation,
    load_model,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DERIVE = 0, 1, 2, 3
MODE_NAMES = {"double": "double", "highprec": "highprec", "exact": "exact_normalized"}
VERIFY_MAX_N = 5000
EXACT_CONVOLUTION_MAX_N = 300


class UsageError(Exception):
    pass


@dataclass
class Source:
    """Recurrence and initial values, either derived now or read from a derivation file."""

    recurrence: object
    initial_numeric: list
    initial_exact: Optional[list]
    digits: int
    fingerprint: str


def _write(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _source(mf: ModelFile, digits: int, recurrence_path: Optional[str], need_exact: bool) -> Source:
    if recurrence_path:
        d = load_derivation(recurrence_path)
        if d.fingerprint != mf.model.fingerprint():
            print("warning: derivation file was produced for a different model", file=sys.stderr)
        return Source(d.recurrence, d.initial_numeric, d.initial_exact, d.digits, d.fingerprint)
    b = derive_recurrence(mf.model, digits, exact=need_exact)
    return Source(b.recurrence, b.initial_numeric, b.initial_exact, digits, b.fingerprint)


def _digits(args, mf: ModelFile) -> int:
    d = args.digits if args.digits is not None else mf.options.digits
    if d < 15:
        raise UsageError("--digits must be at least 15")
    return d


def _n(args, mf: ModelFile) -> int:
    n = args.n if args.n is not None else mf.options.n
    if n < 0:
        raise UsageError("--n must be nonnegative")
    return n


def cmd_derive(args) -> int:
    mf = load_model(args.model)
    digits = _digits(args, mf)
    bundle = derive_recurrence(mf.model, digits)
    _write(dumps_canonical(derivation_to_json(mf.model, bundle)), args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    mf = load_model(args.model)
    digits, n = _digits(args, mf), _n(args, mf)
    mode = MODE_NAMES[args.mode or mf.options.mode]
    if mode == "exact_normalized" and not exact_normalized_available(mf.model):
        raise ModelError("exact mode needs a Poisson, negative binomial or binomial claim number "
                         "and a claim size with an exact series")
    src = _source(mf, digits, args.recurrence, mode == "exact_normalized")
    initial = src.initial_exact if mode == "exact_normalized" else src.initial_numeric
    if initial is None:
        raise ModelError("derivation file has no exact initial values")
    try:
        table = eval_distribution(src.recurrence, initial, n, mode, digits, src.fingerprint)
    except EvaluationError as exc:
        if mode == "double":
            raise EvaluationError(f"{exc}; rerun with --mode highprec") from None
        raise
    _write(table.to_csv(digits), args.out)
    return EXIT_OK


def _max_rel(a: list, b: list) -> float:
    worst = mpmath.mpf(0)
    for x, y in zip(a, b):
        d = abs(x - y)
        worst = max(worst, d / abs(y) if y else d)
    return float(worst)


def cmd_verify(args) -> int:
    mf = load_model(args.model)
    digits, n = _digits(args, mf), _n(args, mf)
    if n > VERIFY_MAX_N:
        raise UsageError(f"verify supports n <= {VERIFY_MAX_N}")
    model = mf.model
    exact = args.mode == "exact"
    if exact and not exact_normalized_available(model):
        raise ModelError("exact verification needs a Panjer-class claim number and exact claim sizes")
    src = _source(mf, digits, args.recurrence, exact)
    tol = 10.0 ** (2 - digits)
    checks = []
    with mpmath.workdps(digits + 10):
        rec = eval_distribution(src.recurrence, src.initial_numeric, n, "highprec", digits)
        oracle = oracle_convolution(model, n, digits)
        checks.append(("convolution", _max_rel(rec.values, oracle.values)))
        checks.append(("annihilation", annihilation_residual(src.recurrence, oracle.values, digits)))
        if model.claim_number.kind in PANJER_KINDS:
            panjer = panjer_for_model(model, n, "highprec", digits)
            checks.append(("panjer", _max_rel(rec.values, panjer.values)))
    report_checks = [{"name": name, "max_relative_discrepancy": mpmath.nstr(v, 6), "tolerance": f"{tol:.0e}",
                      "pass": bool(v <= tol)} for name, v in checks]
    if exact:
        if src.initial_exact is None:
            raise ModelError("derivation file has no exact initial values")
        rec_x = eval_distribution(src.recurrence, src.initial_exact, n, "exact_normalized")
        pan_x = panjer_for_model(model, n, "exact_normalized")
        report_checks.append({"name": "panjer_exact", "pass": rec_x.values == pan_x.values})
        if n <= EXACT_CONVOLUTION_MAX_N:
            conv_x = oracle_convolution(model, n, mode="exact_normalized")
            report_checks.append({"name": "convolution_exact", "pass": rec_x.values == conv_x.values})
    ok = all(c["pass"] for c in report_checks)
    report = {
        "format_version": FORMAT_VERSION,
        "fingerprint": model.fingerprint(),
        "n": n,
        "digits": digits,
        "checks": report_checks,
        "pass": ok,
    }
    _write(dumps_canonical(report), args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_analyze(args) -> int:
    mf = load_model(args.model)
    rep = stability_report(mf.model).to_json()
    rep["fingerprint"] = mf.model.fingerprint()
    _write(dumps_canonical(rep), args.out)
    return EXIT_OK


def _parse_sizes(text: Optional[str]) -> list[int]:
    if not text or not text.strip():
        raise UsageError("--sizes needs a comma-separated list of sizes")
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if "e" in part.lower():
                mant, exp = part.lower().split("e")
                val = int(mant) * 10 ** int(exp)
            else:
                val = int(part)
        except ValueError:
            raise UsageError(f"bad size {part!r}") from None
        if val < 1:
            raise UsageError("sizes must be positive")
        out.append(val)
    return out


def cmd_bench(args) -> int:
    sizes = _parse_sizes(args.sizes)
    mf = load_model(args.model)
    bundle = derive_recurrence(mf.model, _digits(args, mf), exact=False)
    eval_distribution(bundle.recurrence, bundle.initial_numeric, 100, "double")  # compile kernels
    lines = ["task,n,seconds"]
    for n in sizes:
        t0 = time.perf_counter()
        eval_distribution(bundle.recurrence, bundle.initial_numeric, n, "double")
        lines.append(f"recurrence,{n},{time.perf_counter() - t0:.6f}")
    conv_n = args.conv_n if args.conv_n is not None else min(max(sizes), 20000)
    if conv_n > 0:
        t0 = time.perf_counter()
        oracle_convolution(mf.model, conv_n, mode="double")
        lines.append(f"convolution,{conv_n},{time.perf_counter() - t0:.6f}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aggrec", description="Recurrences for compound loss distributions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=False, mode=False, recurrence=False):
        sp.add_argument("--model", required=True, help="model JSON file")
        sp.add_argument("--digits", type=int, default=None, help="working precision in decimal digits (default 30)")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        if n:
            sp.add_argument("--n", type=int, default=None, help="largest index")
        if mode:
            sp.add_argument("--mode", choices=sorted(MODE_NAMES), default=None)
        if recurrence:
            sp.add_argument("--recurrence", default=None, help="derivation JSON produced by 'derive'")

    common(sub.add_parser("derive", help="derive ODE, recurrence and initial values"))
    common(sub.add_parser("eval", help="evaluate the distribution table as CSV"), n=True, mode=True, recurrence=True)
    common(sub.add_parser("verify", help="cross-check against convolution and Panjer oracles"),
           n=True, mode=True, recurrence=True)
    common(sub.add_parser("analyze", help="singularity and stability report"))
    sp = sub.add_parser("bench", help="timing table")
    common(sp)
    sp.add_argument("--sizes", default=None, help="comma-separated sizes, e.g. 100000,1000000")
    sp.add_argument("--conv-n", type=int, default=None, help="size for the convolution baseline (0 to skip)")
    return p


COMMANDS = {"derive": cmd_derive, "eval": cmd_eval, "verify": cmd_verify, "analyze": cmd_analyze, "bench": cmd_bench}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DerivationError, EvaluationError, TruncationError, ArithmeticError) as exc:
        print(f"derivation error: {exc}", file=sys.stderr)
        return EXIT_DERIVE


if __name__ == "__main__":
    sys.exit(main())
