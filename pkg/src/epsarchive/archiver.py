"""Archive update rules.

Three variants share one sequential kernel:

* image-space: reject a candidate that is -eps-dominated by a member or whose
  image lies in the closed box of radius ``delta_star`` around a member's
  image; on acceptance drop every member the newcomer -(eps+delta)-dominates.
* parameter-space: same, but the exclusion box is measured between decision
  vectors (scalar ``delta_star``).
* unbounded: ``delta = delta_star = 0`` and no exclusion test, so the archive
  keeps every point not -eps-dominated by another seen point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numba
import numpy as np

from .core import Archive, ArrayLike, Mode, ToleranceSettings, as_vector, dominated_mask
from .errors import ConfigurationError, DimensionError

log = logging.getLogger(__name__)

REJECT_DOMINATED = 0
ACCEPTED = 1
REJECT_CLOSE = 2


@dataclass(frozen=True, eq=False)
class ArchiverConfig:
    settings: ToleranceSettings
    mode: Mode = Mode.IMAGE

    def __post_init__(self):
        mode = Mode.parse(self.mode)
        object.__setattr__(self, "mode", mode)
        s = self.settings
        if mode is Mode.UNBOUNDED and (np.any(s.delta != 0) or np.any(s.delta_star != 0)):
            object.__setattr__(self, "settings", ToleranceSettings(s.epsilon, 0.0, 0.0))
        if mode is Mode.PARAMETER:
            s.scalar_delta_star()

    @classmethod
    def create(cls, epsilon, delta=0.0, delta_star=None, mode: Mode | str = Mode.IMAGE, strict=False) -> "ArchiverConfig":
        return cls(ToleranceSettings(epsilon, delta, delta_star, strict), Mode.parse(mode))

    def new_archive(self, n: int, capacity: int = 64) -> Archive:
        return Archive(n, self.settings.k, self.settings, self.mode, capacity=capacity)

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, **self.settings.to_dict()}


@dataclass
class UpdateStats:
    accepted: int = 0
    removed: int = 0
    skipped: int = 0
    status: np.ndarray | None = None

    def __iadd__(self, other: "UpdateStats"):
        self.accepted += other.accepted
        self.removed += other.removed
        self.skipped += other.skipped
        return self


@numba.njit(cache=True)
def _update_kernel(AX, AY, AB, size, PX, PY, PB, eps, rem_shift, radius, exclusion, status):
    # exclusion: 0 none, 1 image box, 2 parameter box
    n = PX.shape[1]
    k = PY.shape[1]
    accepted = 0
    removed = 0
    for j in range(PX.shape[0]):
        verdict = ACCEPTED
        for a in range(size):
            le = True
            ne = False
            for i in range(k):
                t = AY[a, i] + eps[i]
                if t > PY[j, i]:
                    le = False
                    break
                if t != PY[j, i]:
                    ne = True
            if le and ne:
                verdict = REJECT_DOMINATED
                break
            if exclusion == 1:
                close = True
                for i in range(k):
                    if abs(PY[j, i] - AY[a, i]) > radius[i]:
                        close = False
                        break
                if close:
                    verdict = REJECT_CLOSE
                    break
            elif exclusion == 2:
                close = True
                for i in range(n):
                    if abs(PX[j, i] - AX[a, i]) > radius[i]:
                        close = False
                        break
                if close:
                    verdict = REJECT_CLOSE
                    break
        status[j] = verdict
        if verdict != ACCEPTED:
            continue
        # prune members dominated by the newcomer, then append it
        w = 0
        for a in range(size):
            le = True
            ne = False
            for i in range(k):
                t = PY[j, i] + rem_shift[i]
                if t > AY[a, i]:
                    le = False
                    break
                if t != AY[a, i]:
                    ne = True
            if le and ne:
                removed += 1
                continue
            if w != a:
                AX[w, :] = AX[a, :]
                AY[w, :] = AY[a, :]
                AB[w] = AB[a]
            w += 1
        AX[w, :] = PX[j, :]
        AY[w, :] = PY[j, :]
        AB[w] = PB[j]
        size = w + 1
        accepted += 1
    return size, accepted, removed


def _as_batch(candidates, n: int | None = None, k: int | None = None):
    """Normalize candidates to ``(X, Y)`` float arrays.

    Accepts a pair of 2-D arrays or an iterable of ``(x, y)`` pairs.
    """
    if isinstance(candidates, tuple) and len(candidates) == 2 and np.ndim(candidates[0]) == 2:
        X = np.asarray(candidates[0], dtype=float)
        Y = np.asarray(candidates[1], dtype=float)
    else:
        pairs = list(candidates)
        if not pairs:
            return np.empty((0, n or 0)), np.empty((0, k or 0))
        X = np.array([as_vector(x) for x, _ in pairs])
        Y = np.array([as_vector(y) for _, y in pairs])
    if X.ndim != 2 or Y.ndim != 2 or X.shape[0] != Y.shape[0]:
        raise DimensionError(f"candidate arrays have incompatible shapes {X.shape} and {Y.shape}")
    if n is not None and X.shape[0] and X.shape[1] != n:
        raise DimensionError(f"candidates have n={X.shape[1]}, archive expects n={n}")
    if k is not None and Y.shape[0] and Y.shape[1] != k:
        raise DimensionError(f"candidates have k={Y.shape[1]} objectives, settings expect k={k}")
    return X, Y


def _exclusion(config: ArchiverConfig, n: int):
    s = config.settings
    if config.mode is Mode.IMAGE:
        return 1, np.ascontiguousarray(s.delta_star, dtype=float)
    if config.mode is Mode.PARAMETER:
        return 2, np.full(n, s.scalar_delta_star())
    return 0, np.zeros(1)


def update_inplace(archive: Archive, candidates, config: ArchiverConfig | None = None, births=None,
                   keep_status: bool = False) -> UpdateStats:
    """Feed candidates through the archiver in order, mutating ``archive``."""
    config = config or ArchiverConfig(archive.settings, archive.mode)
    if config.mode is not archive.mode:
        raise ConfigurationError(f"archive is {archive.mode.value} but config is {config.mode.value}")
    X, Y = _as_batch(candidates, archive.n, archive.k)
    if births is None:
        B = np.zeros(X.shape[0], dtype=np.int64)
    else:
        B = np.broadcast_to(np.asarray(births, dtype=np.int64), (X.shape[0],)).copy()
    finite = np.all(np.isfinite(Y), axis=1) & np.all(np.isfinite(X), axis=1)
    skipped = int(X.shape[0] - finite.sum())
    if skipped:
        log.warning("skipping %d candidate(s) with non-finite values", skipped)
        X, Y, B = X[finite], Y[finite], B[finite]
    status = np.empty(X.shape[0], dtype=np.int8)
    if X.shape[0] == 0:
        return UpdateStats(skipped=skipped, status=status if keep_status else None)
    archive.reserve(X.shape[0])
    kind, radius = _exclusion(config, archive.n)
    s = config.settings
    shift = s.epsilon if config.mode is Mode.UNBOUNDED else s.removal_shift
    size, accepted, removed = _update_kernel(
        archive._X, archive._Y, archive._B, archive.size,
        np.ascontiguousarray(X), np.ascontiguousarray(Y), B,
        np.ascontiguousarray(s.epsilon), np.ascontiguousarray(shift), radius, kind, status,
    )
    archive.size = int(size)
    return UpdateStats(int(accepted), int(removed), skipped, status if keep_status else None)


def archive_update(archive: Archive, candidates, config: ArchiverConfig | None = None, births=None) -> Archive:
    """Return a new archive obtained by offering ``candidates`` to a copy of ``archive``."""
    out = archive.copy()
    update_inplace(out, candidates, config, births)
    return out


def archive_update_unbounded(archive: Archive, candidates) -> Archive:
    """Keep every member of ``candidates`` plus ``archive`` that no other member -eps-dominates.

    Evaluated directly as a set expression over the union rather than
    sequentially, so it serves as a check on the kernel. Exact duplicates
    are all retained.
    """
    X, Y = _as_batch(candidates, archive.n, archive.k)
    finite = np.all(np.isfinite(Y), axis=1)
    if not np.all(finite):
        log.warning("skipping %d candidate(s) with non-finite values", int((~finite).sum()))
        X, Y = X[finite], Y[finite]
    UX = np.vstack([archive.X, X]) if X.shape[0] else archive.X
    UY = np.vstack([archive.Y, Y]) if Y.shape[0] else archive.Y
    births = np.concatenate([archive.births, np.zeros(X.shape[0], dtype=np.int64)])
    keep = ~dominated_mask(UY, UY, archive.settings.epsilon)
    return Archive.from_arrays(UX[keep].reshape(-1, archive.n), UY[keep].reshape(-1, archive.k),
                               archive.settings, archive.mode, births[keep])


def rejection_witness(archive: Archive, y: ArrayLike, x: ArrayLike | None = None,
                      config: ArchiverConfig | None = None) -> tuple[str, int] | None:
    """Explain why a candidate would be rejected right now.

    Returns ``("D1", i)`` when member ``i`` -eps-dominates the candidate,
    ``("D2", i)`` when member ``i`` lies within the exclusion radius, or
    ``None`` when the candidate would be accepted.
    """
    config = config or ArchiverConfig(archive.settings, archive.mode)
    yv = as_vector(y, archive.k, name="y")
    T = archive.Y + config.settings.epsilon
    dominates = np.all(T <= yv, axis=1) & np.any(T != yv, axis=1)
    if np.any(dominates):
        return "D1", int(np.argmax(dominates))
    if config.mode is Mode.IMAGE:
        close = np.all(np.abs(archive.Y - yv) <= config.settings.delta_star, axis=1)
    elif config.mode is Mode.PARAMETER:
        if x is None:
            raise ConfigurationError("parameter-space mode needs the decision vector")
        xv = as_vector(x, archive.n, name="x")
        close = np.max(np.abs(archive.X - xv), axis=1) <= config.settings.scalar_delta_star()
    else:
        return None
    hits = np.flatnonzero(close)
    return ("D2", int(hits[0])) if hits.size else None

