"""Command line entry points.

Subcommands: generate, compare, sweep, lemma1, enumerate. Each accepts
--config (JSON mirroring ExperimentConfig), --seed (overrides the master
placement seed) and --out (overrides the output directory).

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .capacity import NumericalError
from .experiments import (
    ConfigError,
    ExperimentConfig,
    build_network,
    run_compare,
    run_enumerate,
    run_lemma1_diagnostic,
    run_sweep,
    write_nodes_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    config = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        config = config.with_placement(seed=args.seed)
    if args.out is not None:
        config = dataclasses.replace(config, output_dir=args.out)
    return config


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON experiment config")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--out", help="override the output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="udncluster",
                                     description="Capacity-driven clustering experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a network and write nodes.csv")
    _add_common(p)

    p = sub.add_parser("compare", help="compare decomposition methods on fresh networks")
    _add_common(p)

    p = sub.add_parser("sweep", help="aggregate metrics over a list of side lengths")
    _add_common(p)

    p = sub.add_parser("lemma1", help="interference off-diagonal ratio diagnostic")
    _add_common(p)
    p.add_argument("--cluster-sizes", type=int, nargs="+", default=[8],
                   help="base stations per observed cluster")
    p.add_argument("--outside-counts", type=int, nargs="+", default=[100, 1000, 10000],
                   help="outside user counts to scan")
    p.add_argument("--samples", type=int, default=20, help="fading samples per case")

    p = sub.add_parser("enumerate", help="toy-scale exact max-min by brute force")
    _add_common(p)
    p.add_argument("--max-assignments", type=int, default=1_000_000,
                   help="refuse instances beyond this many assignments")

    return parser


def _dispatch(args: argparse.Namespace) -> int:
    config = _load_config(args)
    from pathlib import Path

    out = Path(config.output_dir)
    if args.command == "generate":
        out.mkdir(parents=True, exist_ok=True)
        network = build_network(config, 0)
        write_nodes_csv(out / "nodes.csv", network)
        print(f"wrote {out / 'nodes.csv'} ({network.num_bs} bs, {network.num_users} users)")
    elif args.command == "compare":
        summary = run_compare(config)
        for method, stats in summary["methods"].items():
            print(f"{method}: c_min={stats['c_min_mean']:.6g} c_avg={stats['c_avg_mean']:.6g} "
                  f"c_var={stats['c_var_mean']:.6g}")
        print(f"wrote {out / 'summary.json'}")
    elif args.command == "sweep":
        rows = run_sweep(config)
        print(f"wrote {out / 'sweep.csv'} ({len(rows)} rows)")
    elif args.command == "lemma1":
        rows = run_lemma1_diagnostic(config, args.cluster_sizes, args.outside_counts,
                                     num_samples=args.samples)
        for row in rows:
            print(f"M_l={row['m_l']} outside={row['k_outside']}: mean ratio {row['mean_ratio']:.4f}")
        print(f"wrote {out / 'lemma1.csv'}")
    elif args.command == "enumerate":
        payload = run_enumerate(config, max_assignments=args.max_assignments)
        print(f"exact max-min c_min={payload['c_min']:.6g} over L={payload['L']} clusters")
    else:  # unreachable with required=True
        raise ConfigError(f"unknown command {args.command!r}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
