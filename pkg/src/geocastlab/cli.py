"""Command line front end: run experiments, aggregate bins, compare algorithms."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from .simengine import ALGORITHMS


def _add_run(sub):
    p = sub.add_parser("run", help="simulate algorithms over a topology corpus")
    p.add_argument("--topology", action="append", required=True,
                   help="topology file or directory (repeatable)")
    p.add_argument("--algorithms", default=",".join(ALGORITHMS),
                   help="comma separated subset of " + ",".join(ALGORITHMS))
    p.add_argument("--mode", choices=("geo", "random"), default="geo")
    p.add_argument("--cap", type=int, default=200,
                   help="random mode: max sets per (source, size) stratum")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-nodes", type=int, default=0)
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--out", required=True, help="runs CSV output path")


def _add_aggregate(sub):
    p = sub.add_parser("aggregate", help="bin normalized link usage per algorithm")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--min-nodes", type=int, default=10)
    p.add_argument("--out", required=True)


def _add_compare(sub):
    p = sub.add_parser("compare", help="paired per-spec usage ratio of two algorithms")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--numerator", default="dv4")
    p.add_argument("--denominator", default="path")
    p.add_argument("--out", required=True)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = argparse.ArgumentParser(prog="geocastlab")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run(sub)
    _add_aggregate(sub)
    _add_compare(sub)
    args = parser.parse_args(argv)

    try:
        if args.command == "run":
            config = harness.ExperimentConfig(
                topologies=[Path(p) for p in args.topology],
                algorithms=tuple(a.strip() for a in args.algorithms.split(",") if a.strip()),
                mode=args.mode,
                cap=args.cap,
                seed=args.seed,
                min_nodes=args.min_nodes,
                max_nodes=args.max_nodes,
            )
            rows = list(harness.run_experiment(config))
            with open(args.out, "w", newline="") as out:
                count = harness.write_runs_csv(rows, out)
            print(f"wrote {count} rows to {args.out}")
        elif args.command == "aggregate":
            with open(args.infile, newline="") as src:
                rows = harness.read_runs_csv(src)
            bins = harness.aggregate(rows, min_nodes=args.min_nodes)
            with open(args.out, "w", newline="") as out:
                count = harness.write_bins_csv(bins, out)
            print(f"wrote {count} bins to {args.out}")
        else:
            with open(args.infile, newline="") as src:
                rows = harness.read_runs_csv(src)
            summary = harness.compare_algorithms(rows, args.numerator, args.denominator)
            with open(args.out, "w", newline="") as out:
                harness.write_compare_csv(summary, out)
            print(
                f"{args.numerator}/{args.denominator}: mean {summary.mean:.3f}, "
                f"sd {summary.sd:.3f}, min {summary.min:.3f}, max {summary.max:.3f}"
            )
    except (harness.HarnessError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
