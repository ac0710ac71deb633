#!/usr/bin/env python3
"""Vehicle assignment case study, end to end.

Generates a seeded vehicle-to-demand instance, sweeps a list of risk levels
under common random numbers, and leaves plot-ready CSV files plus the
instance JSON in the output directory. The defaults reproduce the bundled
6-vehicle, 4-demand study.

Usage:
    python scripts/vehicle_sweep.py --out results/vehicle
    python scripts/vehicle_sweep.py --vehicles 8 --demands 5 --seed 3 \
        --alphas 0.05,0.2,0.5,1 --samples 2000 --out results/big
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from cvargreedy.cli import main as cvargreedy


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--vehicles", type=int, default=6)
    parser.add_argument("--demands", type=int, default=4)
    parser.add_argument("--side", type=float, default=10.0,
                        help="side of the square region (default 10)")
    parser.add_argument("--seed", type=int, default=17)
    parser.add_argument("--alphas", default="0.1,0.3,0.6,1.0",
                        help="comma separated risk levels")
    parser.add_argument("--delta", type=float, default=1.0)
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--eval-samples", type=int, default=None,
                        dest="eval_samples")
    parser.add_argument("--bins", type=int, default=30)
    parser.add_argument("--out", default="results/vehicle",
                        help="output directory / file prefix")
    return parser.parse_args()


def run() -> int:
    args = parse_args()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    instance = outdir / "vehicle_instance.json"
    rc = cvargreedy(["gen", "vehicle",
                     "--vehicles", str(args.vehicles),
                     "--demands", str(args.demands),
                     "--side", str(args.side),
                     "--seed", str(args.seed),
                     "--out", str(instance)])
    if rc != 0:
        return rc
    sweep = ["sweep", str(instance),
             "--alphas", args.alphas,
             "--delta", str(args.delta),
             "--samples", str(args.samples),
             "--seed", str(args.seed),
             "--bins", str(args.bins),
             "--out", str(outdir / "vehicle")]
    if args.eval_samples is not None:
        sweep += ["--eval-samples", str(args.eval_samples)]
    return cvargreedy(sweep)


if __name__ == "__main__":
    sys.exit(run())
