"""CSV/JSON readers and writers for archives, reference sets, summaries and run configs."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .core import Archive, Mode, ToleranceSettings
from .errors import ParseError
from .problems import Problem


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_points(path, X: np.ndarray, Y: np.ndarray) -> None:
    """Write ``x1..xn,f1..fk`` rows at full precision."""
    X = np.atleast_2d(X)
    Y = np.atleast_2d(Y)
    n, k = X.shape[1], Y.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{i + 1}" for i in range(n)] + [f"f{i + 1}" for i in range(k)])
        for x, y in zip(X, Y):
            w.writerow([fmt(v) for v in x] + [fmt(v) for v in y])


def read_points(path) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`write_points`; raises :class:`ParseError` with a line number."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty file", 1)
    header = [h.strip() for h in rows[0]]
    n = sum(1 for h in header if h.startswith("x"))
    k = sum(1 for h in header if h.startswith("f"))
    expected = [f"x{i + 1}" for i in range(n)] + [f"f{i + 1}" for i in range(k)]
    if header != expected or k == 0:
        raise ParseError(f"expected header x1..xn,f1..fk, got {','.join(header)}", 1)
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != n + k:
            raise ParseError(f"expected {n + k} fields, got {len(row)}", lineno)
        try:
            vals = [float(c) for c in row]
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise ParseError("non-finite value", lineno)
        data.append(vals)
    arr = np.array(data, dtype=float).reshape(-1, n + k)
    return arr[:, :n], arr[:, n:]


def write_archive(path, archive: Archive) -> None:
    write_points(path, archive.X, archive.Y)


def read_archive(path, settings: ToleranceSettings | None = None, mode: Mode | str = Mode.IMAGE) -> Archive:
    X, Y = read_points(path)
    if settings is None:
        settings = ToleranceSettings(np.ones(Y.shape[1]))
    return Archive.from_arrays(X, Y, settings, mode)


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_instance(path, problem: Problem) -> None:
    """Dump a knapsack instance as ``j,c1,c2,w`` rows (profits as maximized)."""
    profits = problem.metadata["profits"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["j", "c1", "c2", "w"])
        for j in range(problem.n):
            w.writerow([j + 1, fmt(profits[0, j]), fmt(profits[1, j]), fmt(problem.weights[j])])


def read_config(path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {raw!r}", lineno)
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out
