"""Generic stochastic search: generate candidates, offer them to the archiver, repeat."""

from __future__ import annotations

import collections
import logging
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .archiver import ArchiverConfig, update_inplace
from .core import Archive
from .errors import ConfigurationError, DimensionError, FeasibleRegionError
from .problems import Box, Problem

log = logging.getLogger(__name__)

KINDS = ("uniform-box", "binary-feasible", "bitflip-mutation")

# rejection sampling gives up below this acceptance rate over the trailing window
MIN_ACCEPT_RATE = 1e-4
RATE_WINDOW = 1_000_000


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str = "uniform-box"
    batch_size: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown generator kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.batch_size < 1:
            raise ConfigurationError("batch_size must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")

    def check(self, problem: Problem) -> None:
        if self.kind == "uniform-box" and problem.kind != "continuous":
            raise ConfigurationError(f"uniform-box generator needs a continuous problem, {problem.name} is {problem.kind}")
        if self.kind != "uniform-box" and problem.kind != "binary":
            raise ConfigurationError(f"{self.kind} generator needs a binary problem, {problem.name} is {problem.kind}")


@dataclass
class RunSummary:
    total_generated: int = 0
    total_feasible: int = 0
    total_offered: int = 0
    total_nonfinite: int = 0
    total_accepted: int = 0
    total_removed: int = 0
    final_archive_size: int = 0
    wall_time_seconds: float = 0.0
    update_time_seconds: float = 0.0
    seed: int = 0
    image_min: list = field(default_factory=list)
    image_max: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _uniform(box: Box, feasible, rng: np.random.Generator, count: int):
    """Rejection sampler returning ``(points, number_of_draws)``."""
    n = box.dim
    chunks, got, drawn = [], 0, 0
    window = collections.deque()
    win_drawn = win_hit = 0
    rate = 1.0
    while got < count:
        need = count - got
        block = int(min(max(math.ceil(1.2 * need / max(rate, MIN_ACCEPT_RATE)) + 16, 64), 1 << 20))
        X = rng.uniform(box.lower, box.upper, size=(block, n))
        ok = np.asarray(feasible(X), dtype=bool)
        hits = int(ok.sum())
        drawn += block
        chunks.append(X[ok][:need])
        got += min(hits, need)
        window.append((block, hits))
        win_drawn += block
        win_hit += hits
        while len(window) > 1 and win_drawn - window[0][0] >= RATE_WINDOW:
            b, h = window.popleft()
            win_drawn -= b
            win_hit -= h
        rate = win_hit / win_drawn
        if win_drawn >= RATE_WINDOW and rate < MIN_ACCEPT_RATE:
            raise FeasibleRegionError(f"feasible region too small: acceptance rate {rate:.2e} over {win_drawn} draws")
    out = np.concatenate(chunks, axis=0) if chunks else np.empty((0, n))
    return out, drawn


def generate_uniform(box: Box, feasible, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` points uniform on the feasible part of ``box`` (vectorized ``feasible``)."""
    return _uniform(box, feasible, rng, count)[0]


def generate_binary(n: int, weights, capacity: float, rng: np.random.Generator, count: int) -> np.ndarray:
    """Random feasible 0/1 vectors.

    Items are visited in a random order and each is packed with probability
    1/2 if it still fits, so every feasible vector has positive probability.
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,) or np.any(w <= 0):
        raise ConfigurationError("weights must be n positive numbers")
    if capacity < 0:
        raise ConfigurationError("capacity must be non-negative")
    order = np.argsort(rng.random((count, n)), axis=1)
    coins = rng.random((count, n)) < 0.5
    X = np.zeros((count, n))
    load = np.zeros(count)
    rows = np.arange(count)
    for step in range(n):
        j = order[:, step]
        take = coins[:, step] & (load + w[j] <= capacity)
        X[rows[take], j[take]] = 1.0
        load += np.where(take, w[j], 0.0)
    return X


def generate_bitflip(parents: np.ndarray, weights, capacity: float, rng: np.random.Generator, count: int) -> np.ndarray:
    """Flip each bit of a uniformly chosen parent with probability 1/n, then repair.

    Repair drops randomly chosen packed items until the capacity holds.
    """
    parents = np.atleast_2d(parents)
    n = parents.shape[1]
    w = np.asarray(weights, dtype=float)
    X = parents[rng.integers(0, parents.shape[0], size=count)].copy()
    flips = rng.random((count, n)) < 1.0 / n
    X[flips] = 1.0 - X[flips]
    keys = np.where(X == 1.0, rng.random((count, n)), np.inf)
    order = np.argsort(keys, axis=1)
    load = X @ w
    rows = np.arange(count)
    for step in range(n):
        over = load > capacity
        if not np.any(over):
            break
        j = order[:, step]
        drop = over & (X[rows, j] == 1.0)
        X[rows[drop], j[drop]] = 0.0
        load -= np.where(drop, w[j], 0.0)
    return X


class _Stream:
    """Draws feasible candidates for one run; tracks draw counts."""

    def __init__(self, problem: Problem, spec: GeneratorSpec):
        spec.check(problem)
        self.problem = problem
        self.spec = spec
        self.rng = np.random.default_rng(int(spec.seed))
        self.generated = 0
        self.feasible = 0

    def draw(self, count: int, archive: Archive | None = None) -> np.ndarray:
        p = self.problem
        if self.spec.kind == "uniform-box":
            X, drawn = _uniform(p.domain, p.feasible_batch, self.rng, count)
        elif self.spec.kind == "bitflip-mutation" and archive is not None and len(archive):
            X, drawn = generate_bitflip(archive.X, p.weights, p.capacity, self.rng, count), count
        else:
            X, drawn = generate_binary(p.n, p.weights, p.capacity, self.rng, count), count
        self.generated += drawn
        self.feasible += X.shape[0]
        return X

    def draw_raw(self, count: int, archive: Archive | None = None) -> np.ndarray:
        """Draw exactly ``count`` raw points and keep the feasible ones."""
        if self.spec.kind != "uniform-box":
            return self.draw(count, archive)
        p = self.problem
        X = self.rng.uniform(p.domain.lower, p.domain.upper, size=(count, p.n))
        X = X[p.feasible_batch(X)]
        self.generated += count
        self.feasible += X.shape[0]
        return X


def _chunk(spec: GeneratorSpec) -> int:
    if spec.kind == "bitflip-mutation":
        return spec.batch_size
    # archive-independent generators: any multiple of the batch gives the same sequence
    return spec.batch_size * max(1, 8192 // spec.batch_size)


def run_shared(problem: Problem, generator: GeneratorSpec, archivers: list[ArchiverConfig], budget: int,
               progress=None, count: str = "feasible") -> list[tuple[Archive, RunSummary]]:
    """Offer one candidate sequence to several archivers side by side.

    With ``count="feasible"`` exactly ``budget`` feasible, finite-valued
    points are offered to every archive. With ``count="draws"`` the budget
    is the number of raw points drawn in the box, infeasible ones included,
    and only the feasible part is offered.
    The bitflip generator reads the archive, so it only supports one config.
    """
    if budget < 1:
        raise ConfigurationError("budget must be >= 1")
    if count not in ("feasible", "draws"):
        raise ConfigurationError(f"count must be 'feasible' or 'draws', got {count!r}")
    if generator.kind == "bitflip-mutation" and len(archivers) != 1:
        raise ConfigurationError("bitflip-mutation runs cannot share a candidate stream")
    for cfg in archivers:
        if cfg.settings.k != problem.k:
            raise DimensionError(f"settings have k={cfg.settings.k}, {problem.name} has k={problem.k}")
    stream = _Stream(problem, generator)
    archives = [cfg.new_archive(problem.n, capacity=256) for cfg in archivers]
    summaries = [RunSummary(seed=int(generator.seed), config={
        "problem": problem.name, "budget": budget, "count": count, "generator": asdict(generator), "archiver": cfg.to_dict()})
        for cfg in archivers]
    lo = np.full(problem.k, np.inf)
    hi = np.full(problem.k, -np.inf)
    offered = nonfinite = 0
    chunk = _chunk(generator)
    start = time.perf_counter()
    while (offered if count == "feasible" else stream.generated) < budget:
        if count == "feasible":
            X = stream.draw(min(chunk, budget - offered), archives[0])
        else:
            X = stream.draw_raw(min(chunk, budget - stream.generated), archives[0])
        Y = problem.evaluate_batch(X)
        finite = np.all(np.isfinite(Y), axis=1)
        if not np.all(finite):
            nonfinite += int((~finite).sum())
            log.warning("skipping %d candidate(s) with non-finite objectives", int((~finite).sum()))
            X, Y = X[finite], Y[finite]
        if X.shape[0] == 0:
            continue
        lo = np.minimum(lo, Y.min(axis=0))
        hi = np.maximum(hi, Y.max(axis=0))
        births = np.arange(offered + 1, offered + 1 + X.shape[0])
        for archive, cfg, summary in zip(archives, archivers, summaries):
            t0 = time.perf_counter()
            stats = update_inplace(archive, (X, Y), cfg, births)
            summary.update_time_seconds += time.perf_counter() - t0
            summary.total_accepted += stats.accepted
            summary.total_removed += stats.removed
        offered += X.shape[0]
        if progress is not None:
            progress(offered, budget)
    wall = time.perf_counter() - start
    for archive, summary in zip(archives, summaries):
        summary.total_generated = stream.generated
        summary.total_feasible = stream.feasible
        summary.total_offered = offered
        summary.total_nonfinite = nonfinite
        summary.final_archive_size = len(archive)
        summary.wall_time_seconds = wall
        if offered:
            summary.image_min = lo.tolist()
            summary.image_max = hi.tolist()
    return list(zip(archives, summaries))


def run(problem: Problem, generator: GeneratorSpec, archiver: ArchiverConfig, budget: int,
        progress=None, count: str = "feasible") -> tuple[Archive, RunSummary]:
    """Run random search until ``budget`` feasible points have been offered to the archiver."""
    return run_shared(problem, generator, [archiver], budget, progress, count)[0]
