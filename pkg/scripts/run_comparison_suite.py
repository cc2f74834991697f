#!/usr/bin/env python3
"""Desk-scale comparison of the three decomposition methods.

Sweeps the square side length for both node layouts (uniform and centered
Gaussian) and writes one sweep.csv per layout, ready for the plotting
frontend (`plot metric_vs_area --in <dir>/ud --out ...`).
"""
import argparse
from pathlib import Path

from udncluster import ExperimentConfig, PhysicalParams, PlacementSpec, RefinementConfig, run_sweep


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/comparison", help="output root")
    parser.add_argument("--sweep", type=float, nargs="+", default=[50.0, 75.0, 100.0])
    parser.add_argument("--reps", type=int, default=5, help="seeded repetitions per point")
    parser.add_argument("--seed", type=int, default=4000)
    parser.add_argument("--max-iterations", type=int, default=600)
    args = parser.parse_args()

    for label, distribution in (("ud", "uniform"), ("gd", "gaussian")):
        config = ExperimentConfig(
            placement=PlacementSpec(distribution=distribution, seed=args.seed),
            physical=PhysicalParams(),
            refinement=RefinementConfig(delta=0.2, max_iterations=args.max_iterations, seed=0),
            mc_samples_refine=200,
            mc_samples_report=500,
            bs_per_cluster=4,
            sweep=tuple(args.sweep),
            repetitions=args.reps,
        )
        out = Path(args.out) / label
        rows = run_sweep(config, out)
        print(f"[{label}] wrote {out / 'sweep.csv'}")
        for row in rows:
            print(f"  a={row['a']:>6.1f} {row['method']:<14} "
                  f"c_min={row['c_min_mean']:.5f} c_avg={row['c_avg_mean']:.5f} "
                  f"c_var={row['c_var_mean']:.6f}")


if __name__ == "__main__":
    main()
