#!/usr/bin/env python3
"""Regenerate the phase-transition figures at desk scale.

Runs the Monte-Carlo success-rate sweeps for all four joint-sparse
recovery algorithms on the standard 20x30 Gaussian ensemble and writes
per-trial records, aggregated curves, and SVG plots to out/.

At the default 100 trials per cell this takes on the order of half an
hour on a single core; pass --trials 10 for a quick smoke run.
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from jsparse.bench import (
    SweepConfig,
    aggregate,
    run_sweep,
    write_curves_csv,
    write_records_csv,
)
from jsparse.svgplot import render_svg


def run(name, cfg, outdir, title, show_bounds):
    t0 = time.perf_counter()
    records = run_sweep(cfg)
    curves = aggregate(records)
    write_records_csv(records, outdir / f"{name}_records.csv")
    write_curves_csv(curves, outdir / f"{name}_curves.csv")
    (outdir / f"{name}.svg").write_text(
        render_svg(curves, show_bounds=show_bounds, title=title)
    )
    print(f"{name}: {len(records)} trials in {time.perf_counter() - t0:.0f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100, help="trials per (r, k) cell")
    ap.add_argument("--seed", type=int, default=2026, help="master seed")
    ap.add_argument("--out", default="out", help="output directory")
    args = ap.parse_args()

    outdir = pathlib.Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    base = dict(m=20, n=30, r_list=(1, 2, 8, 16), k_range=(1, 20),
                trials=args.trials, master_seed=args.seed)

    run("somp_rembo", SweepConfig(algorithms=("somp", "rembo"), **base), outdir,
        "S-OMP and ReMBo success rates (20x30 Gaussian)", show_bounds=False)
    run("combo", SweepConfig(algorithms=("combo",), **base), outdir,
        "CoMBo success rates vs recoverability bound (20x30 Gaussian)",
        show_bounds=True)
    base["r_list"] = (5,)
    run("r5_compare", SweepConfig(algorithms=("rembo", "naivecat", "combo"), **base),
        outdir, "ReMBo vs naive concatenation vs CoMBo at rank 5", show_bounds=False)
    print(f"figures written to {outdir}/")


if __name__ == "__main__":
    main()
