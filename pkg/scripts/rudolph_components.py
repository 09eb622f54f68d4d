#!/usr/bin/env python3
"""Rudolph problem: archive sizes and component counts for the three archiver variants.

    python3 scripts/rudolph_components.py --seeds 10 --bound 20
"""

import argparse
from pathlib import Path

import numpy as np

from epsarchive import ArchiverConfig, GeneratorSpec, get_problem, run_shared
from epsarchive.io import write_archive
from epsarchive.metrics import single_linkage_clusters


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--bound", type=float, default=20.0, help="domain is [-bound, bound]^2")
    ap.add_argument("--radius", type=float, default=0.6, help="single-linkage radius")
    ap.add_argument("--out", type=Path, default=Path("results/rudolph"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    problem = get_problem("rudolph", bound=args.bound)
    variants = {
        "delta0": ArchiverConfig.create([0.1, 0.1], 0.0),
        "image": ArchiverConfig.create([0.1, 0.1], [0.02, 0.02]),
        "param": ArchiverConfig.create([0.1, 0.1], 0.1, mode="parameter-space"),
    }
    sizes = {k: [] for k in variants}
    clusters = {k: [] for k in variants}
    for seed in range(args.seeds):
        results = run_shared(problem, GeneratorSpec(seed=seed), list(variants.values()), args.budget)
        for name, (archive, _) in zip(variants, results):
            sizes[name].append(len(archive))
            clusters[name].append(len(set(single_linkage_clusters(archive.X, args.radius))))
            if seed == 0:
                write_archive(args.out / f"archive_{name}.csv", archive)
    for name in variants:
        print(f"{name:>7}: mean |A| {np.mean(sizes[name]):8.1f}  clusters {sorted(set(clusters[name]))}")


if __name__ == "__main__":
    main()
