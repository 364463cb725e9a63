#!/usr/bin/env python3
"""Run every registered experiment and print a verdict summary.

Each experiment writes its report.json and CSV tables into
<out>/<experiment>/.  The script exits nonzero if any experiment fails.

Usage:
    python3 scripts/run_all_experiments.py --out results --seed 0
"""

import argparse
import sys
from pathlib import Path

from cclab.cli import REGISTRY, ExperimentConfig, run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--only", nargs="*", default=None,
                        help="subset of experiment names to run")
    args = parser.parse_args()

    names = args.only if args.only else sorted(REGISTRY)
    unknown = set(names) - set(REGISTRY)
    if unknown:
        parser.error(f"unknown experiments: {sorted(unknown)}")

    worst = 0
    for name in names:
        cfg = ExperimentConfig(experiment=name, seed=args.seed,
                               out=str(Path(args.out) / name))
        report = run(cfg)
        status = report.verdict
        print(f"{name:24s} {status:12s} {report.wall_clock:8.2f}s")
        if status != "pass":
            worst = max(worst, 2 if status == "inconclusive" else 1)
    return worst


if __name__ == "__main__":
    sys.exit(main())
