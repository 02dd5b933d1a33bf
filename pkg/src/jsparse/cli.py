"""Command-line interface.

Subcommands: gen (write a problem instance), solve (run one algorithm on
an instance file), bench (Monte-Carlo sweep to CSV), plot (CSV to SVG),
bounds (recoverability and sparsity-budget tables).

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 solver
non-convergence on solve.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bench import (
    ALGORITHMS,
    CsvFormatError,
    MmvInstance,
    SweepConfig,
    aggregate,
    gen_instance,
    read_curves_csv,
    run_algorithm,
    run_sweep,
    write_curves_csv,
    write_records_csv,
)
from .bounds import deterministic_bound, sparsity_budget, success
from .linalg import derive_stream
from .mmv import MmvAlgoConfig, MmvProblem


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(","))


def _parse_range(text: str) -> tuple[int, int]:
    """'a:b' inclusive, or a single value."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return int(lo), int(hi)
    v = int(text)
    return v, v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jsparse", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random MMV instance (JSON)")
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--k", type=int, required=True)
    p_gen.add_argument("--r", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)

    p_solve = sub.add_parser("solve", help="run one algorithm on an instance file")
    p_solve.add_argument("--instance", required=True)
    p_solve.add_argument("--algo", choices=ALGORITHMS, required=True)
    p_solve.add_argument("--eps", type=float, default=1e-5)
    p_solve.add_argument("--max-iter", type=int, default=None)
    p_solve.add_argument("--k", type=int, default=None, help="sparsity hint (defaults to the instance's k)")
    p_solve.add_argument("--p", type=float, default=2.0, help="S-OMP correlation norm, in [1, 2]")
    p_solve.add_argument("--guard-residual", action="store_true")
    p_solve.add_argument("--seed", type=int, default=0)

    p_bench = sub.add_parser("bench", help="Monte-Carlo sweep to CSV")
    p_bench.add_argument("--m", type=int, default=20)
    p_bench.add_argument("--n", type=int, default=30)
    p_bench.add_argument("--r", type=_parse_int_list, default=(1, 2, 8, 16), metavar="R1,R2,...")
    p_bench.add_argument("--k", type=_parse_range, default=(1, 20), metavar="LO:HI")
    p_bench.add_argument("--trials", type=int, default=100)
    p_bench.add_argument("--algos", type=lambda s: tuple(s.split(",")), default=ALGORITHMS)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--eps", type=float, default=1e-5)
    p_bench.add_argument("--timings", action="store_true",
                         help="record wall times (makes output run-dependent)")
    p_bench.add_argument("--curves", action="store_true",
                         help="also write aggregated curves next to the records")
    p_bench.add_argument("--out", required=True)

    p_plot = sub.add_parser("plot", help="render a curves CSV as SVG")
    p_plot.add_argument("--in", dest="infile", required=True)
    p_plot.add_argument("--out", required=True)
    p_plot.add_argument("--bound", action="store_true", help="draw deterministic bound lines")
    p_plot.add_argument("--title", default="Recovery rate vs sparsity")

    p_bounds = sub.add_parser("bounds", help="print recoverability and budget tables")
    p_bounds.add_argument("--m", type=int, required=True)
    p_bounds.add_argument("--n", type=int, required=True)
    p_bounds.add_argument("--r", type=int, required=True)
    p_bounds.add_argument("--k-max", type=int, required=True)

    return parser


def _cmd_gen(args) -> int:
    inst = gen_instance(args.m, args.n, args.k, args.r, derive_stream(args.seed, "instance", args.r, args.k, 0))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(inst.to_json())
        fh.write("\n")
    print(f"wrote instance m={args.m} n={args.n} k={args.k} r={args.r} to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    with open(args.instance, encoding="utf-8") as fh:
        inst = MmvInstance.from_json(fh.read())
    k_hint = args.k if args.k is not None else inst.k
    cfg = MmvAlgoConfig(
        eps=args.eps,
        max_iter=args.max_iter,
        p_norm=args.p,
        k_known=k_hint,
        guard_residual=args.guard_residual,
    )
    rng = derive_stream(args.seed, "solve", args.algo)
    result = run_algorithm(args.algo, MmvProblem(inst.A, inst.Y), cfg, rng)
    ok = success(inst.X, result.X_hat)
    print(f"algorithm      : {args.algo}")
    print(f"support        : {result.support}")
    print(f"true support   : {inst.support}")
    print(f"recovered      : {ok}")
    print(f"converged      : {result.converged}")
    print(f"boosts_used    : {result.boosts_used}")
    print(f"smv_solves     : {result.smv_solves}")
    print(f"runtime        : {result.runtime_s * 1000:.1f} ms")
    return 0 if result.converged else 3


def _cmd_bench(args) -> int:
    cfg = SweepConfig(
        m=args.m,
        n=args.n,
        r_list=args.r,
        k_range=args.k,
        trials=args.trials,
        algorithms=args.algos,
        master_seed=args.seed,
        worker_count=args.workers,
        timings=args.timings,
        algo_configs={a: MmvAlgoConfig(eps=args.eps) for a in args.algos},
    )
    records = run_sweep(cfg)
    write_records_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    if args.curves:
        curves_path = str(args.out) + ".curves.csv"
        write_curves_csv(aggregate(records), curves_path)
        print(f"wrote curves to {curves_path}")
    return 0


def _cmd_plot(args) -> int:
    from .svgplot import render_svg

    curves = read_curves_csv(args.infile)
    if not curves:
        raise CsvFormatError(f"{args.infile}: no curves found")
    svg = render_svg(curves, show_bounds=args.bound, title=args.title)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
        fh.write("\n")
    print(f"wrote {args.out}")
    return 0


def _cmd_bounds(args) -> int:
    spark = args.m + 1  # generic spark for Gaussian A
    print(f"generic spark(A) = m + 1 = {spark}  (m={args.m}, n={args.n})")
    print()
    print("recoverable sparsity (unique solution guaranteed up to this k):")
    print(f"{'k':>4} {'rank(Y)':>8} {'bound':>6} {'recoverable':>12}")
    for k in range(1, args.k_max + 1):
        rank_y = min(k, args.r)
        bound = deterministic_bound(spark, rank_y)
        print(f"{k:>4} {rank_y:>8} {bound:>6} {str(k <= bound):>12}")
    print()
    print("sparsity budget of the concatenated SMV (boosted vs naive):")
    print(f"{'k':>4} {'total_boosted':>14} {'total_naive':>12} {'avg_boosted':>12} {'avg_naive':>10}")
    for k in range(1, args.k_max + 1):
        b = sparsity_budget(k, args.r)
        print(f"{k:>4} {b.total_boosted:>14} {b.total_naive:>12} {b.average_boosted:>12.2f} {b.average_naive:>10.2f}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "plot":
            return _cmd_plot(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, CsvFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
