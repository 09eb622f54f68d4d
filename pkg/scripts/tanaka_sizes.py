#!/usr/bin/env python3
"""Tanaka archive sizes and update times for several discretizations.

All archivers see the same candidate sequence.

    python3 scripts/tanaka_sizes.py --budget 200000 --out results/tanaka
"""

import argparse
import csv
from pathlib import Path

from epsarchive import ArchiverConfig, GeneratorSpec, get_problem, run_shared
from epsarchive.io import write_archive
from epsarchive.metrics import bound_for_run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--epsilon", type=float, default=0.1)
    ap.add_argument("--deltas", type=float, nargs="+", default=[0.0, 0.01, 0.05])
    ap.add_argument("--budget", type=int, default=200_000)
    ap.add_argument("--count", choices=["feasible", "draws"], default="draws")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("results/tanaka"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    problem = get_problem("tanaka")
    cfgs = [ArchiverConfig.create([args.epsilon] * 2, d) for d in args.deltas]
    results = run_shared(problem, GeneratorSpec(seed=args.seed), cfgs, args.budget, count=args.count)

    rows = []
    for d, (archive, summary) in zip(args.deltas, results):
        bound = bound_for_run(archive.settings, summary.image_min, summary.image_max) if d > 0 else float("inf")
        rows.append({"delta": d, "size": len(archive), "update_seconds": round(summary.update_time_seconds, 3),
                     "bound": round(bound, 1)})
        write_archive(args.out / f"archive_delta{d:g}.csv", archive)
    with open(args.out / "sizes.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    print(f"{'delta':>8} {'|A|':>6} {'T [s]':>8} {'bound':>10}")
    for r in rows:
        print(f"{r['delta']:>8g} {r['size']:>6} {r['update_seconds']:>8.3f} {r['bound']:>10}")


if __name__ == "__main__":
    main()
