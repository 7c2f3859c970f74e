#!/usr/bin/env python3
"""Round sweep for the selection-frequency experiment.

Runs the fuzzy consensus simulation at several round counts (default
100..500 in steps of 100, 20 repetitions each), writes the usual four
result files, and prints the per-label aggregate table per sweep point.

    python3 scripts/run_exp1_sweep.py --seed 42 --out runs/exp1_sweep
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fuzzychain.config import ExperimentConfig
from fuzzychain.experiments import run_experiment1
from fuzzychain.outputs import emit_outputs, format_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--rounds", default="100,200,300,400,500",
                    help="comma-separated sweep points")
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--out", default="runs/exp1_sweep")
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    cfg = ExperimentConfig(
        experiment="exp1",
        seed=args.seed,
        rounds=tuple(int(r) for r in args.rounds.split(",")),
        repetitions=args.reps,
    ).validate()

    report = run_experiment1(cfg, workers=args.workers)
    emit_outputs(report, args.out)
    sys.stdout.write(format_report(args.out))
    print(f"\nresult files in {args.out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
