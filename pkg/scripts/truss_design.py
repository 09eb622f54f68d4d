#!/usr/bin/env python3
"""Four-bar truss: archive size with and without discretization.

    python3 scripts/truss_design.py --budget 500000
"""

import argparse
from pathlib import Path

from epsarchive import ArchiverConfig, GeneratorSpec, get_problem, run_shared
from epsarchive.io import write_archive


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=500_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--delta", type=float, nargs=2, default=[10.0, 0.0001])
    ap.add_argument("--out", type=Path, default=Path("results/truss"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    problem = get_problem("truss")
    eps = [50.0, 0.0005]
    cfgs = {"delta": ArchiverConfig.create(eps, args.delta), "delta0": ArchiverConfig.create(eps, 0.0)}
    results = run_shared(problem, GeneratorSpec(seed=args.seed), list(cfgs.values()), args.budget)
    for name, (archive, summary) in zip(cfgs, results):
        write_archive(args.out / f"archive_{name}.csv", archive)
        print(f"{name:>7}: |A| {len(archive):6d}  update {summary.update_time_seconds:.2f} s")


if __name__ == "__main__":
    main()
