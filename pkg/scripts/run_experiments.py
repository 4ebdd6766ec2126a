"""Run every named experiment and print one JSON report per line.

    python scripts/run_experiments.py --seed 0 --no-timing > reports.jsonl

Exits 1 if any experiment fails its check.
"""

from __future__ import annotations

import argparse
import sys

from hypersketch.experiments import EXPERIMENTS, run_experiment


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--only", nargs="*", choices=sorted(EXPERIMENTS), help="subset of experiments to run")
    ap.add_argument("--no-timing", action="store_true", help="omit wall_time_ms so output is byte-stable")
    args = ap.parse_args(argv)

    failed = 0
    for name in args.only or EXPERIMENTS:
        report = run_experiment(name, None, args.seed)
        print(report.to_json(timing=not args.no_timing), flush=True)
        failed += not report.passed
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
