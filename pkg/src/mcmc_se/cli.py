"""Command-line front end: ``mcmc-se estimate | benchmark | bias``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
Outputs are a pure function of the flags, input files and seed unless
``--timing`` asks for wall-clock measurements.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from .cc import METHODS, PARALLEL_METHODS, estimate
from .chain_data import MultiChain, load_chain
from .diagnostics import ess
from .errors import (
    ChainFormatError,
    ChainTooShortError,
    InsufficientBatchesError,
    InsufficientChainsError,
    LagRangeError,
    McmcSeError,
    NonstationaryError,
)
from .var_bench import BENCH_METHODS, BenchmarkConfig, BiasConfig, bias_experiment, run_benchmark

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4
DEFAULT_SEED = 20240601
SLOW_MISE_N = 100_000
STAN_METHODS = ("stan-cc",)


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats printed to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if hasattr(obj, "tolist"):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _strip_timing(diag):
    out = {}
    for k, v in diag.items():
        if k in ("wall_clock", "stage_seconds"):
            continue
        out[k] = v
    return out


def _int_list(text):
    try:
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _methods(args, allowed, default):
    chosen = list(args.method or [])
    for group in args.methods or []:
        chosen.extend(m.strip() for m in group.split(",") if m.strip())
    chosen = list(dict.fromkeys(chosen)) or list(default)
    bad = [m for m in chosen if m not in allowed]
    if bad:
        raise UsageError(f"unknown method(s) {', '.join(bad)}; choose from {', '.join(allowed)}")
    return chosen


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_estimate(args) -> int:
    methods = _methods(args, METHODS, ["cc-ise"])
    if not args.input:
        raise UsageError("estimate needs at least one --input CSV file")
    chains = []
    for path in args.input:
        try:
            chains.append(load_chain(path, has_header=None))
        except FileNotFoundError:
            raise ChainFormatError(f"{path}: no such file") from None
        except (ChainFormatError, ChainTooShortError) as exc:
            raise type(exc)(f"{path}: {exc}") from None
    try:
        mc = MultiChain(tuple(chains))
    except ChainFormatError as exc:
        raise ChainFormatError(f"input chains differ in shape: {exc}") from None

    for m in methods:
        if m in PARALLEL_METHODS and m != "gcc-ise" and mc.M < 2:
            what = "STAN methods need" if m in STAN_METHODS else f"{m} needs"
            raise UsageError(f"{what} >= 2 chains (pass --input more than once)")

    result = {}
    for m in methods:
        est = estimate(m, mc, args.batch_size, mise_mode=args.mise_mode)
        sample = mc.pooled() if m in PARALLEL_METHODS else mc.chains[0]
        e = ess(sample, est)
        diag = est.diagnostics if args.timing else _strip_timing(est.diagnostics)
        result[m] = {
            "dim": est.d,
            "sigma": est.sigma.reshape(-1),
            "diagnostics": diag,
            "ess": e.ess,
            "ess_per_n": e.ess_per_n,
        }
    _write(dumps(result) + "\n", args.out)
    return EXIT_OK


def cmd_benchmark(args) -> int:
    methods = _methods(args, BENCH_METHODS, ["bm", "cc-ise"])
    n_grid = args.n or [5000, 10000, 50000, 100000]
    if "mise" in methods and max(n_grid) > SLOW_MISE_N and not args.allow_slow:
        raise UsageError(
            f"mISE at n = {max(n_grid)} costs O(d^2 n t_n) per replication and can take hours; "
            "pass --allow-slow to run it anyway"
        )
    if "stan-cc" in methods and args.chains < 2:
        raise UsageError("STAN methods need >= 2 chains (--chains M with M >= 2)")
    cfg = BenchmarkConfig(
        d=args.d,
        rho=args.rho,
        n_grid=tuple(n_grid),
        reps=args.reps,
        methods=tuple(methods),
        seed=args.seed,
        M=args.chains,
        batch_size=args.batch_size,
        mise_mode=args.mise_mode,
        method_reps={"mise": args.mise_reps} if args.mise_reps else {},
    )
    report = run_benchmark(cfg)
    csv_text = report.to_csv(timing=args.timing)
    json_text = report.to_json(timing=args.timing) + "\n"
    if args.out and args.out != "-":
        out = Path(args.out)
        primary, secondary = (csv_text, json_text) if args.format == "csv" else (json_text, csv_text)
        out.write_text(primary, encoding="utf-8")
        other = out.with_suffix(".json" if args.format == "csv" else ".csv")
        if other != out:
            other.write_text(secondary, encoding="utf-8")
    else:
        _write(csv_text if args.format == "csv" else json_text, None)
    for f in report.failures:
        print(f"warning: {f['method']} failed at n={f['n']} rep={f['rep']}: {f['error']}", file=sys.stderr)
    return EXIT_OK


BIAS_COLUMNS = ("rho", "cov_rel_bias", "corr_rel_bias", "cov_rel_det", "corr_rel_det")


def cmd_bias(args) -> int:
    cfg = BiasConfig(d=args.d, n=args.n[0] if args.n else 10000, b_n=args.batch_size, reps=args.reps, seed=args.seed)
    if args.rho_grid:
        cfg.rho_grid = tuple(args.rho_grid)
    rows = bias_experiment(cfg)
    if args.format == "json":
        text = dumps(rows) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(BIAS_COLUMNS)
        for r in rows:
            w.writerow([repr(r[c]) for c in BIAS_COLUMNS])
        text = buf.getvalue()
    _write(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcmc-se",
        description="Estimate the asymptotic covariance of MCMC sample means.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    method_help = "estimator tag, repeatable; one of: " + ", ".join(METHODS)

    def common(p):
        p.add_argument("--method", action="append", metavar="TAG", help=method_help)
        p.add_argument("--methods", action="append", metavar="TAG,TAG", help="comma-separated method tags")
        p.add_argument("--batch-size", type=int, default=None, help="fixed batch size (default floor(n^(1/3)))")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"base seed (default {DEFAULT_SEED})")
        p.add_argument("--timing", action="store_true", help="record wall-clock seconds (output no longer reproducible)")
        p.add_argument("--mise-mode", choices=("sequential", "fft"), default="sequential")

    est = sub.add_parser("estimate", help="estimate Sigma from chain CSV files")
    common(est)
    est.add_argument("--input", action="append", metavar="CSV", help="chain file, repeatable (one per parallel chain)")
    est.add_argument("--format", choices=("json",), default="json")
    est.set_defaults(func=cmd_estimate)

    bench = sub.add_parser("benchmark", help="VAR(1) accuracy/coverage/timing study")
    common(bench)
    bench.add_argument("--d", type=int, default=12)
    bench.add_argument("--rho", type=float, default=1.01)
    bench.add_argument("--n", type=_int_list, default=None, help="comma-separated chain lengths")
    bench.add_argument("--reps", type=int, default=200)
    bench.add_argument("--chains", type=int, default=1, metavar="M", help="parallel chains for gcc-ise / stan-cc")
    bench.add_argument("--mise-reps", type=int, default=None, help="cap on mISE replications")
    bench.add_argument("--allow-slow", action="store_true", help=f"permit mISE with n > {SLOW_MISE_N}")
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    bench.set_defaults(func=cmd_benchmark)

    bias = sub.add_parser("bias", help="batch-means covariance vs correlation bias study")
    common(bias)
    bias.add_argument("--d", type=int, default=12)
    bias.add_argument("--rho", dest="rho_grid", type=_float_list, default=None, help="comma-separated rho grid ('inf' for Phi = 0)")
    bias.add_argument("--n", type=_int_list, default=None)
    bias.add_argument("--reps", type=int, default=100)
    bias.add_argument("--format", choices=("csv", "json"), default="csv")
    bias.set_defaults(func=cmd_bias)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ChainFormatError, ChainTooShortError, LagRangeError, InsufficientBatchesError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InsufficientChainsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonstationaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (McmcSeError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
