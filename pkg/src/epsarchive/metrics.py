"""Set distances, brute-force reference sets, archive-size bounds and decision-support queries."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numba
import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from .core import Archive, ArchiveEntry, ArrayLike, as_vector
from .errors import ConfigurationError, DimensionError, DomainError, SizeError
from .problems import Box, Problem

DEFAULT_CELL_CAP = 250_000


def _point_set(S, name: str) -> np.ndarray:
    arr = np.asarray(S, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise DomainError(f"{name} must be a non-empty set of vectors")
    return arr


def semi_dist(B, A) -> float:
    """``max_{u in B} min_{v in A} ||u - v||_inf``; a 1-D array is read as a set of scalars."""
    B = _point_set(B, "B")
    A = _point_set(A, "A")
    if A.shape[1] != B.shape[1]:
        raise DimensionError(f"point dimensions differ: {B.shape[1]} vs {A.shape[1]}")
    worst = 0.0
    step = max(1, 4_000_000 // max(1, A.shape[0] * A.shape[1]))
    for lo in range(0, B.shape[0], step):
        d = np.max(np.abs(B[lo : lo + step, None, :] - A[None, :, :]), axis=2)
        worst = max(worst, float(d.min(axis=1).max()))
    return worst


def hausdorff(A, B) -> float:
    return max(semi_dist(A, B), semi_dist(B, A))


@dataclass(frozen=True, eq=False)
class ReferenceSet:
    X: np.ndarray
    Y: np.ndarray
    resolution: np.ndarray
    epsilon: np.ndarray
    weak: bool = False

    def __len__(self) -> int:
        return self.X.shape[0]


@numba.njit(cache=True)
def _survivors(Y, eps, order, sums, slack, weak):
    m, k = Y.shape
    keep = np.ones(m, dtype=np.bool_)
    eps_sum = 0.0
    for i in range(k):
        eps_sum += eps[i]
    for xi in range(m):
        limit = sums[xi] - eps_sum + slack
        for r in range(m):
            yi = order[r]
            if sums[yi] > limit:
                break
            if yi == xi:
                continue
            le = True
            ne = False
            for i in range(k):
                t = Y[yi, i] + eps[i]
                if weak:
                    if not t < Y[xi, i]:
                        le = False
                        break
                else:
                    if t > Y[xi, i]:
                        le = False
                        break
                    if t != Y[xi, i]:
                        ne = True
            if le and (ne or weak):
                keep[xi] = False
                break
    return keep


def nondominated_under(Y: np.ndarray, epsilon, weak: bool = False) -> np.ndarray:
    """Mask of rows not -eps-dominated by any other row (strict "<" in every objective if ``weak``)."""
    Y = np.ascontiguousarray(np.atleast_2d(np.asarray(Y, dtype=float)))
    eps = np.ascontiguousarray(as_vector(epsilon, Y.shape[1], name="epsilon"))
    if Y.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    sums = Y.sum(axis=1)
    order = np.argsort(sums, kind="stable")
    # a dominator's coordinate sum is at most sum(x) - sum(eps); slack absorbs rounding
    slack = 1e-9 * (float(np.abs(Y).max()) + float(np.abs(eps).sum()) + 1.0) * Y.shape[1]
    return _survivors(Y, eps, order, sums, slack, weak)


def grid(box: Box, resolution) -> np.ndarray:
    steps = as_vector(resolution, box.dim, name="resolution")
    if np.any(steps <= 0):
        raise ConfigurationError("grid resolution must be positive")
    axes = []
    for lo, hi, h in zip(box.lower, box.upper, steps):
        count = int(math.floor((hi - lo) / h + 1e-9)) + 1
        axes.append(lo + h * np.arange(count))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def grid_size(box: Box, resolution) -> int:
    steps = as_vector(resolution, box.dim, name="resolution")
    return int(np.prod([math.floor((hi - lo) / h + 1e-9) + 1 for lo, hi, h in zip(box.lower, box.upper, steps)]))


def reference_set(problem: Problem, epsilon, resolution, cell_cap: int = DEFAULT_CELL_CAP,
                  weak: bool = False) -> ReferenceSet:
    """Feasible grid points of ``problem.domain`` that no other grid point -eps-dominates.

    ``epsilon = 0`` gives the grid Pareto set; ``weak=True`` switches to the
    strict comparison, which keeps weak (-eps) Pareto points as well.
    """
    if problem.kind != "continuous":
        raise ConfigurationError("reference sets are built on continuous problems only")
    eps = as_vector(epsilon, problem.k, name="epsilon")
    if np.any(eps < 0):
        raise ConfigurationError("epsilon must be non-negative")
    steps = as_vector(resolution, problem.n, name="resolution")
    cells = grid_size(problem.domain, steps)
    if cells > cell_cap:
        raise SizeError(f"grid has {cells} cells, above the cap of {cell_cap}")
    G = grid(problem.domain, steps)
    G = G[problem.feasible_batch(G)]
    F = problem.evaluate_batch(G)
    keep = nondominated_under(F, eps, weak)
    return ReferenceSet(G[keep], F[keep], steps, eps, weak)


def archive_bound_image(epsilon, delta: float, delta_star: float, m, M) -> float:
    """Upper bound on the converged archive size for image-space discretization."""
    eps = as_vector(epsilon, name="epsilon")
    k = eps.shape[0]
    lo = as_vector(m, k, name="m")
    hi = as_vector(M, k, name="M")
    if delta_star <= 0:
        raise DomainError("the archive bound needs delta_star > 0")
    if np.any(hi <= lo):
        raise DomainError("image box needs M > m componentwise")
    side = hi - lo + delta_star
    total = 0.0
    for i in range(k):
        total += (eps[i] + 2.0 * delta + delta_star) * float(np.prod(np.delete(side, i)))
    return total / delta_star**k


def archive_bound_param(delta_star: float, box: Box) -> float:
    """Upper bound on the archive size for parameter-space discretization."""
    if delta_star <= 0:
        raise DomainError("the archive bound needs delta_star > 0")
    return (1.0 / delta_star + 1.0) ** box.dim * float(np.prod(box.widths))


def bound_for_run(settings, image_min, image_max, inflate: float = 0.05) -> float:
    """Image bound with the sampled image box widened by ``inflate`` of its width on each side."""
    lo = np.asarray(image_min, dtype=float)
    hi = np.asarray(image_max, dtype=float)
    pad = 0.5 * inflate * np.maximum(hi - lo, 0.0)
    lo, hi = lo - pad, hi + pad
    hi = np.where(hi > lo, hi, lo + np.finfo(float).eps * (1.0 + np.abs(lo)))
    if not settings.is_scalar:
        raise ConfigurationError("the image bound is stated for a scalar delta")
    return archive_bound_image(settings.epsilon, float(settings.delta[0]), settings.scalar_delta_star(), lo, hi)


def _min_norm_pair(g1: np.ndarray, g2: np.ndarray) -> float:
    diff = g1 - g2
    dd = float(diff @ diff)
    if dd == 0.0:
        return 0.5
    return min(1.0, max(0.0, float(g2 @ (g2 - g1)) / dd))


def min_norm_direction(gradients) -> tuple[np.ndarray, np.ndarray]:
    """Shortest convex combination ``q`` of the rows of ``gradients`` and its weights.

    ``q == 0`` certifies first-order Pareto criticality; otherwise ``-q``
    decreases every objective. Exact: closed form for two gradients,
    enumeration of active sets beyond that.
    """
    G = np.atleast_2d(np.asarray(gradients, dtype=float))
    k = G.shape[0]
    if k == 0 or G.size == 0:
        raise DomainError("min_norm_direction needs at least one gradient")
    if k == 1:
        return G[0].copy(), np.ones(1)
    if k == 2:
        a = _min_norm_pair(G[0], G[1])
        alpha = np.array([a, 1.0 - a])
        return _snap(alpha, G), alpha
    # the minimizing weights are scale invariant; normalizing keeps the KKT solves well conditioned
    top = float(np.max(np.linalg.norm(G, axis=1)))
    if top == 0.0:
        return np.zeros(G.shape[1]), np.full(k, 1.0 / k)
    Gs = G / top
    gram = Gs @ Gs.T
    # any simplex point meeting the KKT condition <g_i, q> >= |q|^2 is a global minimizer,
    # so keep the candidate that violates it least (robust to near-ties in the norm)
    best, best_key = None, (math.inf, math.inf)
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(k), size):
            idx = list(subset)
            alpha = np.zeros(k)
            if size == 2:
                a = _min_norm_pair(Gs[idx[0]], Gs[idx[1]])
                alpha[idx] = (a, 1.0 - a)
            else:
                kkt = np.zeros((size + 1, size + 1))
                kkt[:size, :size] = gram[np.ix_(idx, idx)]
                kkt[:size, size] = 1.0
                kkt[size, :size] = 1.0
                rhs = np.zeros(size + 1)
                rhs[size] = 1.0
                sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
                sol = (sol + np.linalg.lstsq(kkt, rhs - kkt @ sol, rcond=None)[0])[:size]  # one refinement step
                if np.any(sol < -1e-12):
                    continue
                alpha[idx] = np.clip(sol, 0.0, None)
                total = alpha.sum()
                if total <= 0:
                    continue
                alpha /= total
            q = alpha @ Gs
            val = float(q @ q)
            key = (max(0.0, float(np.max(val - Gs @ q))), val)
            if key < best_key:
                best, best_key = alpha, key
    return _snap(best, G), best


def _snap(alpha: np.ndarray, G: np.ndarray) -> np.ndarray:
    """``alpha @ G``, set to exactly zero when it is below the rounding error of the sum."""
    q = alpha @ G
    scale = float(alpha @ np.linalg.norm(G, axis=1))
    if np.linalg.norm(q) <= 8.0 * G.shape[0] * np.finfo(float).eps * scale:
        return np.zeros_like(q)
    return q


def region_of_interest(archive: Archive, y0: ArrayLike, tol: ArrayLike | float) -> list[ArchiveEntry]:
    return [archive[i] for i in roi_indices(archive.Y, y0, tol)]


def roi_indices(Y: np.ndarray, y0: ArrayLike, tol: ArrayLike | float) -> np.ndarray:
    """Rows of ``Y`` inside the closed box ``|y - y0| <= tol``."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    center = as_vector(y0, Y.shape[1], name="y0")
    t = as_vector(tol, Y.shape[1], name="tol")
    if np.any(t < 0):
        raise ConfigurationError("tolerance must be non-negative")
    return np.flatnonzero(np.all(np.abs(Y - center) <= t, axis=1))


def hamming(x1: ArrayLike, x2: ArrayLike) -> int:
    a = as_vector(x1, name="x1")
    b = as_vector(x2, a.shape[0], name="x2")
    if not (np.all((a == 0) | (a == 1)) and np.all((b == 0) | (b == 1))):
        raise DomainError("hamming distance is defined on 0/1 vectors")
    return int(np.count_nonzero(a != b))


def nondominated_indices(Y: np.ndarray) -> np.ndarray:
    """Indices of rows that no other row Pareto-dominates."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    return np.flatnonzero(nondominated_under(Y, np.zeros(Y.shape[1])))


def single_linkage_clusters(X: np.ndarray, radius: float) -> np.ndarray:
    """Cluster labels (1-based) joining points closer than ``radius`` (Euclidean, chained)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] == 1:
        return np.ones(1, dtype=int)
    return fcluster(linkage(X, method="single"), t=radius, criterion="distance")


def convergence_radius(wide: ReferenceSet | np.ndarray, reference: ReferenceSet | np.ndarray, delta: float) -> float:
    """``max(delta, dist(F(wide), F(reference)))``: the Hausdorff radius a converged archive respects."""
    wy = wide.Y if isinstance(wide, ReferenceSet) else wide
    ry = reference.Y if isinstance(reference, ReferenceSet) else reference
    return max(float(delta), semi_dist(wy, ry))
