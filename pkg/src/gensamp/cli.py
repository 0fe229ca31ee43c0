"""Command line entry point: ``gensamp <experiment> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from .experiments import EXPERIMENTS, ExperimentConfig, ExperimentError, UsageError, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gensamp",
        description="Reproduce the generalized sampling figures and examples as CSV files.",
    )
    parser.add_argument("experiment", choices=sorted(EXPERIMENTS), help="experiment id")
    parser.add_argument("--out", default="results", help="output directory (default: results)")
    parser.add_argument("--epsilon", type=float, help="sample spacing in (0, 1]")
    parser.add_argument("--n", type=int, help="number of reconstruction functions")
    parser.add_argument("--m", type=int, help="number of samples")
    parser.add_argument("--grid", type=int, help="evaluation grid size (experiment specific)")
    parser.add_argument("--seed", type=int, help="seed for generated coefficients")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    config = ExperimentConfig(
        experiment=args.experiment,
        out=args.out,
        epsilon=args.epsilon,
        n=args.n,
        m=args.m,
        grid=args.grid,
        seed=args.seed,
    )
    try:
        files, summary = run(config)
    except UsageError as exc:
        parser.error(str(exc))
    except ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(summary)
    for f in files:
        print(f"  wrote {f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
