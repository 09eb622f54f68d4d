#!/usr/bin/env python3
"""Production model: Delta = 0 against Delta = eps/3 and the two symmetric components.

    python3 scripts/production_model.py --budget 100000
"""

import argparse
from pathlib import Path

import numpy as np

from epsarchive import ArchiverConfig, GeneratorSpec, get_problem, run_shared
from epsarchive.io import write_archive


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--budget", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("results/production"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    problem = get_problem("production", n=args.n)
    eps = np.array([0.1, 0.001])
    cfgs = {"delta0": ArchiverConfig.create(eps, 0.0), "delta_eps3": ArchiverConfig.create(eps, eps / 3)}
    results = run_shared(problem, GeneratorSpec(seed=args.seed), list(cfgs.values()), args.budget)
    for name, (archive, summary) in zip(cfgs, results):
        X = archive.X
        near1 = int(np.sum((X[:, 0] < 1) & (X[:, 1] > 5)))
        near2 = int(np.sum((X[:, 1] < 1) & (X[:, 0] > 5)))
        write_archive(args.out / f"archive_{name}.csv", archive)
        print(f"{name:>10}: |A| {len(archive):5d}  x1~0: {near1:4d}  x2~0: {near2:4d}  "
              f"update {summary.update_time_seconds:.2f} s")


if __name__ == "__main__":
    main()
