"""Vectors, tolerance settings, dominance predicates and the archive container."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigurationError, DimensionError, InvariantError

ArrayLike = Sequence[float] | np.ndarray


class Mode(str, enum.Enum):
    """Where the archiver measures the exclusion distance."""

    IMAGE = "image-space"
    PARAMETER = "parameter-space"
    UNBOUNDED = "unbounded"

    @classmethod
    def parse(cls, value: "Mode | str") -> "Mode":
        if isinstance(value, Mode):
            return value
        aliases = {"image": cls.IMAGE, "parameter": cls.PARAMETER, "param": cls.PARAMETER}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ConfigurationError(f"unknown archiver mode {value!r} (expected one of {names})") from None


def as_vector(values: ArrayLike | float, length: int | None = None, name: str = "vector") -> np.ndarray:
    """Return ``values`` as a 1-D float array, broadcasting a scalar to ``length``."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        if length is None:
            arr = arr.reshape(1)
        else:
            arr = np.full(length, float(arr))
    elif arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise DimensionError(f"{name} has length {arr.shape[0]}, expected {length}")
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ToleranceSettings:
    """Tolerance ``epsilon``, discretization ``delta`` and exclusion radius ``delta_star``.

    Scalars are broadcast to the objective count ``k = len(epsilon)``. Leaving
    ``delta_star`` unset uses ``delta`` itself, which is the usual practical
    choice. ``strict=True`` additionally demands ``delta_star < delta``.
    """

    epsilon: np.ndarray
    delta: np.ndarray | float = 0.0
    delta_star: np.ndarray | float | None = None
    strict: bool = False

    def __post_init__(self):
        eps = as_vector(self.epsilon, name="epsilon")
        k = eps.shape[0]
        delta = as_vector(self.delta, k, name="delta")
        star = delta.copy() if self.delta_star is None else as_vector(self.delta_star, k, name="delta_star")
        if not np.all(np.isfinite(eps)) or np.any(eps <= 0):
            raise ConfigurationError(f"epsilon must be finite and strictly positive, got {eps.tolist()}")
        if not np.all(np.isfinite(delta)) or np.any(delta < 0):
            raise ConfigurationError(f"delta must be finite and non-negative, got {delta.tolist()}")
        if not np.all(np.isfinite(star)) or np.any(star < 0):
            raise ConfigurationError(f"delta_star must be finite and non-negative, got {star.tolist()}")
        if np.any(star > delta):
            raise ConfigurationError(f"delta_star {star.tolist()} exceeds delta {delta.tolist()}")
        if self.strict and np.any(star >= delta):
            raise ConfigurationError("strict mode requires 0 < delta_star < delta componentwise")
        object.__setattr__(self, "epsilon", _readonly(eps))
        object.__setattr__(self, "delta", _readonly(delta))
        object.__setattr__(self, "delta_star", _readonly(star))

    @property
    def k(self) -> int:
        return self.epsilon.shape[0]

    @property
    def is_scalar(self) -> bool:
        """True when delta and delta_star are each constant across objectives."""
        return bool(np.all(self.delta == self.delta[0]) and np.all(self.delta_star == self.delta_star[0]))

    @property
    def removal_shift(self) -> np.ndarray:
        """Shift ``epsilon + delta`` used when pruning members after an acceptance."""
        return self.epsilon + self.delta

    def scalar_delta_star(self) -> float:
        if not np.all(self.delta_star == self.delta_star[0]):
            raise ConfigurationError("a scalar delta_star is required here, got a vector")
        return float(self.delta_star[0])

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon.tolist(),
            "delta": self.delta.tolist(),
            "delta_star": self.delta_star.tolist(),
            "strict": self.strict,
        }


def shifted_dominates(y_a: ArrayLike, y_b: ArrayLike, shift: ArrayLike | float) -> bool:
    """True iff ``y_a + shift <= y_b`` componentwise and ``y_a + shift != y_b``.

    ``shift = +eps`` is -eps-dominance, ``shift = -eps`` is eps-dominance and
    ``shift = 0`` is plain Pareto dominance. Comparisons are exact.
    """
    ya = as_vector(y_a, name="y_a")
    yb = as_vector(y_b, ya.shape[0], name="y_b")
    s = as_vector(shift, ya.shape[0], name="shift")
    t = ya + s
    return bool(np.all(t <= yb) and np.any(t != yb))


def chebyshev_distance(y_a: ArrayLike, y_b: ArrayLike) -> float:
    ya = as_vector(y_a, name="y_a")
    yb = as_vector(y_b, ya.shape[0], name="y_b")
    return float(np.max(np.abs(ya - yb))) if ya.shape[0] else 0.0


def dominated_mask(Y: np.ndarray, Z: np.ndarray, shift: ArrayLike | float) -> np.ndarray:
    """``out[j]`` is True iff some row of ``Y`` shift-dominates row ``j`` of ``Z``."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Y.shape[1] != Z.shape[1]:
        raise DimensionError(f"objective counts differ: {Y.shape[1]} vs {Z.shape[1]}")
    s = as_vector(shift, Y.shape[1], name="shift")
    out = np.zeros(Z.shape[0], dtype=bool)
    if Y.shape[0] == 0:
        return out
    T = Y + s
    step = max(1, 2_000_000 // max(1, Y.shape[0] * Y.shape[1]))
    for lo in range(0, Z.shape[0], step):
        z = Z[lo : lo + step, None, :]
        le = np.all(T[None, :, :] <= z, axis=2)
        ne = np.any(T[None, :, :] != z, axis=2)
        out[lo : lo + step] = np.any(le & ne, axis=1)
    return out


@dataclass(frozen=True, eq=False)
class ArchiveEntry:
    x: np.ndarray
    y: np.ndarray
    birth_iteration: int = 0

    def __repr__(self):
        return f"ArchiveEntry(x={self.x.tolist()}, y={self.y.tolist()}, birth_iteration={self.birth_iteration})"


@dataclass(eq=False)
class Archive:
    """Insertion-ordered store of ``(x, F(x))`` pairs backed by growable arrays.

    Rows ``[0, len(self))`` of the buffers are live; removals compact the
    buffers while keeping the relative order of survivors.
    """

    n: int
    k: int
    settings: ToleranceSettings
    mode: Mode = Mode.IMAGE
    capacity: int = 64
    _X: np.ndarray = field(init=False, repr=False)
    _Y: np.ndarray = field(init=False, repr=False)
    _B: np.ndarray = field(init=False, repr=False)
    size: int = field(init=False, default=0)

    def __post_init__(self):
        self.mode = Mode.parse(self.mode)
        if self.settings.k != self.k:
            raise DimensionError(f"settings have k={self.settings.k} objectives, archive has k={self.k}")
        cap = max(1, int(self.capacity))
        self._X = np.empty((cap, self.n))
        self._Y = np.empty((cap, self.k))
        self._B = np.empty(cap, dtype=np.int64)

    @classmethod
    def from_arrays(cls, X, Y, settings: ToleranceSettings, mode: Mode | str = Mode.IMAGE, births=None) -> "Archive":
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        if X.shape[0] != Y.shape[0]:
            raise DimensionError(f"{X.shape[0]} decision rows but {Y.shape[0]} objective rows")
        archive = cls(X.shape[1], Y.shape[1], settings, mode, capacity=max(64, X.shape[0]))
        m = X.shape[0]
        archive._X[:m] = X
        archive._Y[:m] = Y
        archive._B[:m] = 0 if births is None else np.asarray(births, dtype=np.int64)
        archive.size = m
        return archive

    def reserve(self, extra: int) -> None:
        need = self.size + extra
        if need <= self._X.shape[0]:
            return
        cap = max(need, 2 * self._X.shape[0])
        for name in ("_X", "_Y", "_B"):
            old = getattr(self, name)
            new = np.empty((cap,) + old.shape[1:], dtype=old.dtype)
            new[: self.size] = old[: self.size]
            setattr(self, name, new)
        self.capacity = cap

    @property
    def X(self) -> np.ndarray:
        return self._X[: self.size]

    @property
    def Y(self) -> np.ndarray:
        return self._Y[: self.size]

    @property
    def births(self) -> np.ndarray:
        return self._B[: self.size]

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> ArchiveEntry:
        if not -self.size <= i < self.size:
            raise IndexError(i)
        i %= self.size
        return ArchiveEntry(self._X[i].copy(), self._Y[i].copy(), int(self._B[i]))

    def __iter__(self) -> Iterator[ArchiveEntry]:
        return (self[i] for i in range(self.size))

    @property
    def entries(self) -> list[ArchiveEntry]:
        return list(self)

    def copy(self) -> "Archive":
        return Archive.from_arrays(self.X, self.Y, self.settings, self.mode, self.births)

    def violations(self) -> list[str]:
        """Describe every violated archive invariant (empty list when valid)."""
        problems = []
        X, Y = self.X, self.Y
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
            problems.append("non-finite coordinates in archive")
        m = self.size
        if m < 2:
            return problems
        eps = self.settings.epsilon
        shift = eps if self.mode is Mode.UNBOUNDED else self.settings.removal_shift
        for i in range(m):
            others = np.arange(m) != i
            if self.mode is Mode.IMAGE:
                close = np.all(np.abs(Y[others] - Y[i]) <= self.settings.delta_star, axis=1)
                if np.any(close):
                    problems.append(f"entries {i} and {np.flatnonzero(others)[np.argmax(close)]} within delta_star in image space")
            elif self.mode is Mode.PARAMETER:
                close = np.max(np.abs(X[others] - X[i]), axis=1) <= self.settings.scalar_delta_star()
                if np.any(close):
                    problems.append(f"entries {i} and {np.flatnonzero(others)[np.argmax(close)]} within delta_star in parameter space")
            dom = dominated_mask(Y[i], Y[others], shift)
            if np.any(dom):
                problems.append(f"entry {i} dominates entry {np.flatnonzero(others)[np.argmax(dom)]} with shift {shift.tolist()}")
        return problems

    def validate(self) -> None:
        problems = self.violations()
        if problems:
            raise InvariantError("; ".join(problems[:5]))
