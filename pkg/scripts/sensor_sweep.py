#!/usr/bin/env python3
"""Sensor coverage case study, end to end.

Generates a seeded occupancy-grid instance with failure-prone sensors, sweeps
a list of risk levels, and additionally runs the brute-force guarantee check
when the candidate count stays within the enumeration cap. Outputs land in
the chosen directory: instance JSON, sweep CSVs and the verification report.

Usage:
    python scripts/sensor_sweep.py --out results/sensor
    python scripts/sensor_sweep.py --rows 16 --cols 16 --candidates 10 \
        --select 5 --alphas 0.1,0.5,1 --out results/sensor_large --no-verify
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from cvargreedy import ENUMERATION_CAP
from cvargreedy.cli import main as cvargreedy


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--candidates", type=int, default=8)
    parser.add_argument("--select", type=int, default=4)
    parser.add_argument("--rows", type=int, default=12)
    parser.add_argument("--cols", type=int, default=12)
    parser.add_argument("--obstacle-density", type=float, default=0.2,
                        dest="obstacle_density")
    parser.add_argument("--grid", default=None,
                        help="text file with 0/1 rows instead of a random grid")
    parser.add_argument("--seed", type=int, default=2)
    parser.add_argument("--alphas", default="0.1,0.3,0.6,1.0")
    parser.add_argument("--delta", type=float, default=1.0)
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--bins", type=int, default=30)
    parser.add_argument("--verify-alpha", type=float, default=0.3,
                        dest="verify_alpha",
                        help="risk level for the guarantee check (default 0.3)")
    parser.add_argument("--no-verify", action="store_true",
                        help="skip the brute-force guarantee check")
    parser.add_argument("--out", default="results/sensor")
    return parser.parse_args()


def run() -> int:
    args = parse_args()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    instance = outdir / "sensor_instance.json"
    gen = ["gen", "sensor",
           "--candidates", str(args.candidates),
           "--select", str(args.select),
           "--seed", str(args.seed),
           "--out", str(instance)]
    if args.grid is not None:
        gen += ["--grid", args.grid]
    else:
        gen += ["--rows", str(args.rows), "--cols", str(args.cols),
                "--obstacle-density", str(args.obstacle_density)]
    rc = cvargreedy(gen)
    if rc != 0:
        return rc
    rc = cvargreedy(["sweep", str(instance),
                     "--alphas", args.alphas,
                     "--delta", str(args.delta),
                     "--samples", str(args.samples),
                     "--seed", str(args.seed),
                     "--bins", str(args.bins),
                     "--out", str(outdir / "sensor")])
    if rc != 0:
        return rc
    if args.no_verify:
        return 0
    if args.candidates > ENUMERATION_CAP:
        print(f"skipping guarantee check: {args.candidates} candidates exceed "
              f"the enumeration cap of {ENUMERATION_CAP}")
        return 0
    return cvargreedy(["verify", str(instance),
                       "--alpha", str(args.verify_alpha),
                       "--delta", str(args.delta),
                       "--samples", str(args.samples),
                       "--seed", str(args.seed),
                       "--out", str(outdir / "sensor_verify.json")])


if __name__ == "__main__":
    sys.exit(run())
