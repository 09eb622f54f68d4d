#!/usr/bin/env python3
"""Bi-objective knapsack: nondominated subset and a region of interest with Hamming distances.

    python3 scripts/knapsack_roi.py --budget 200000 --instance-seed 0
"""

import argparse
from pathlib import Path

import numpy as np

from epsarchive import ArchiverConfig, GeneratorSpec, get_problem, run
from epsarchive.io import write_archive, write_instance
from epsarchive.metrics import hamming, nondominated_indices, roi_indices


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=200_000)
    ap.add_argument("--instance-seed", type=int, default=0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--generator", default="binary-feasible", choices=["binary-feasible", "bitflip-mutation"])
    ap.add_argument("--tol", type=float, default=1.0)
    ap.add_argument("--out", type=Path, default=Path("results/knapsack"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    problem = get_problem("knapsack", seed=args.instance_seed)
    archive, _ = run(problem, GeneratorSpec(args.generator, seed=args.seed), ArchiverConfig.create([2.0, 2.0]), args.budget)
    write_instance(args.out / "instance.csv", problem)
    write_archive(args.out / "archive.csv", archive)
    nd = nondominated_indices(archive.Y)
    print(f"|A| = {len(archive)}, nondominated = {len(nd)}")

    # pick the nondominated point whose ROI holds the most decision-space variety
    def spread(i):
        hits = roi_indices(archive.Y, archive.Y[i], args.tol)
        return sum(hamming(archive.X[j], archive.X[i]) >= 5 for j in hits if j != i)

    i0 = max(nd, key=spread)
    print(f"y0 = {(-archive.Y[i0]).round(2).tolist()} (profits)")
    for j in roi_indices(archive.Y, archive.Y[i0], args.tol):
        print(f"  profits {np.round(-archive.Y[j], 2).tolist()}  hamming {hamming(archive.X[j], archive.X[i0]):2d}")


if __name__ == "__main__":
    main()
