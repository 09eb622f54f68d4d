"""Benchmark problems behind a single :class:`Problem` interface.

Objective and constraint callables are vectorized over rows: they take an
``(m, n)`` array and return ``(m, k)`` objectives or an ``(m,)`` feasibility
mask. Row results never depend on the other rows in the batch, so a point
evaluated alone reproduces the value it got inside a batch bit for bit.
Maximization problems are stored negated; everything here is minimized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import ArrayLike, as_vector
from .errors import ConfigurationError, DimensionError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class Box:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = as_vector(self.lower, name="lower")
        hi = as_vector(self.upper, lo.shape[0], name="upper")
        if not np.all(lo < hi):
            raise ConfigurationError(f"box needs lower < upper componentwise, got {lo.tolist()} / {hi.tolist()}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, n: int, lo: float, hi: float) -> "Box":
        return cls(np.full(n, float(lo)), np.full(n, float(hi)))

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        return np.all((X >= self.lower) & (X <= self.upper), axis=1)


@dataclass(frozen=True, eq=False)
class Problem:
    name: str
    n: int
    k: int
    domain: Box
    objectives: Callable[[np.ndarray], np.ndarray]
    constraints: Callable[[np.ndarray], np.ndarray] | None = None
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None
    kind: str = "continuous"
    weights: np.ndarray | None = None
    capacity: float | None = None
    metadata: dict = field(default_factory=dict)

    def _rows(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n:
            raise DimensionError(f"{self.name} expects points of length {self.n}, got shape {X.shape}")
        return X

    def evaluate(self, x: ArrayLike) -> np.ndarray:
        return self.evaluate_batch(as_vector(x, self.n, name="x"))[0]

    def evaluate_batch(self, X) -> np.ndarray:
        X = self._rows(X)
        return np.asarray(self.objectives(X), dtype=float).reshape(X.shape[0], self.k)

    def feasible(self, x: ArrayLike) -> bool:
        return bool(self.feasible_batch(as_vector(x, self.n, name="x"))[0])

    def feasible_batch(self, X) -> np.ndarray:
        X = self._rows(X)
        ok = self.domain.contains(X)
        if self.constraints is not None:
            ok &= np.asarray(self.constraints(X), dtype=bool)
        return ok

    def gradient(self, x: ArrayLike) -> np.ndarray:
        """Objective gradients as a ``(k, n)`` array."""
        if self.jacobian is None:
            raise ConfigurationError(f"{self.name} has no analytic gradients")
        return np.asarray(self.jacobian(as_vector(x, self.n, name="x")), dtype=float).reshape(self.k, self.n)

    @property
    def default_epsilon(self) -> np.ndarray | None:
        eps = self.metadata.get("default_epsilon")
        return None if eps is None else as_vector(eps, self.k)


def _column_sum(X: np.ndarray, coef=None) -> np.ndarray:
    # explicit left-to-right accumulation keeps per-row results batch independent
    out = np.zeros(X.shape[0])
    for j in range(X.shape[1]):
        out = out + (X[:, j] if coef is None else coef[j] * X[:, j])
    return out


def tanaka() -> Problem:
    """Identity objectives on [0, pi]^2 with the two Tanaka constraints.

    ``arctan(x1/x2)`` is taken as ``arctan2(x1, x2)``, i.e. pi/2 on ``x2 = 0``.
    The origin is infeasible.
    """

    def objectives(X):
        return X.copy()

    def constraints(X):
        x1, x2 = X[:, 0], X[:, 1]
        c1 = x1 * x1 + x2 * x2 - 1.0 - 0.1 * np.cos(16.0 * np.arctan2(x1, x2))
        c2 = (x1 - 0.5) ** 2 + (x2 - 0.5) ** 2
        return (c1 >= 0.0) & (c2 <= 0.5) & ((x1 != 0.0) | (x2 != 0.0))

    return Problem(
        "tanaka", 2, 2, Box.cube(2, 0.0, math.pi), objectives, constraints,
        jacobian=lambda x: np.eye(2),
        metadata={"default_epsilon": [0.1, 0.1]},
    )


def tanaka_c1(X) -> np.ndarray:
    X = np.atleast_2d(X)
    return X[:, 0] ** 2 + X[:, 1] ** 2 - 1.0 - 0.1 * np.cos(16.0 * np.arctan2(X[:, 0], X[:, 1]))


def tanaka_c2(X) -> np.ndarray:
    X = np.atleast_2d(X)
    return (X[:, 0] - 0.5) ** 2 + (X[:, 1] - 0.5) ** 2


def _rudolph_tiles(X, a, b, c):
    x1, x2 = X[:, 0], X[:, 1]
    t1 = np.sign(x1) * np.minimum(np.ceil((np.abs(x1) - a - c / 2.0) / (2.0 * a + c)), 1.0)
    t2 = np.sign(x2) * np.minimum(np.ceil((np.abs(x2) - b / 2.0) / b), 1.0)
    return t1, t2


def rudolph(a: float = 0.5, b: float = 5.0, c: float = 5.0, bound: float = 20.0) -> Problem:
    """Nine-tile problem: every tile holds a Pareto segment with the same image.

    The domain is ``[-bound, bound]^2``; it must exceed ``c + 3a`` and ``b`` so
    that all nine segments lie inside it.
    """
    if min(a, b, c) <= 0:
        raise ConfigurationError("rudolph needs a, b, c > 0")
    if bound <= max(c + 3.0 * a, b):
        raise ConfigurationError("rudolph bound must contain the outer Pareto segments")

    def objectives(X):
        t1, t2 = _rudolph_tiles(X, a, b, c)
        u = X[:, 0] - t1 * (c + 2.0 * a)
        v = (X[:, 1] - t2 * b) ** 2
        return np.column_stack([(u + a) ** 2 + v, (u - a) ** 2 + v])

    def jacobian(x):
        t1, t2 = _rudolph_tiles(x[None, :], a, b, c)
        u = x[0] - t1[0] * (c + 2.0 * a)
        dv = 2.0 * (x[1] - t2[0] * b)
        return np.array([[2.0 * (u + a), dv], [2.0 * (u - a), dv]])

    return Problem(
        "rudolph", 2, 2, Box.cube(2, -bound, bound), objectives, jacobian=jacobian,
        metadata={"default_epsilon": [0.1, 0.1], "a": a, "b": b, "c": c, "bound": bound, "tile": (c + 2.0 * a, b)},
    )


def production(n: int = 5) -> Problem:
    """Cost versus failure-rate production model on [0, 40]^n."""
    if n < 3:
        raise ConfigurationError("production needs n >= 3")

    def failure_terms(X):
        W = np.empty_like(X)
        W[:, :2] = 0.01 * np.exp(-((X[:, :2] / 20.0) ** 2.5))
        W[:, 2:] = 0.01 * np.exp(-X[:, 2:] / 15.0)
        return W

    def objectives(X):
        W = failure_terms(X)
        survive = np.ones(X.shape[0])
        for j in range(n):
            survive = survive * (1.0 - W[:, j])
        return np.column_stack([_column_sum(X), 1.0 - survive])

    def jacobian(x):
        w = failure_terms(x[None, :])[0]
        dw = np.empty(n)
        dw[:2] = w[:2] * (-2.5 / 20.0) * (x[:2] / 20.0) ** 1.5
        dw[2:] = -w[2:] / 15.0
        g2 = np.array([dw[j] * np.prod(np.delete(1.0 - w, j)) for j in range(n)])
        return np.vstack([np.ones(n), g2])

    return Problem(
        "production", n, 2, Box.cube(n, 0.0, 40.0), objectives, jacobian=jacobian,
        metadata={"default_epsilon": [0.1, 0.001]},
    )


def truss(L: float = 200.0, E: float = 2e5, sigma: float = 10.0, load: float = 10.0) -> Problem:
    """Four-bar plane truss: volume versus joint displacement."""
    if min(L, E, sigma, load) <= 0:
        raise ConfigurationError("truss constants must be positive")
    r = load / sigma
    lower = np.array([r, SQRT2 * r, SQRT2 * r, r])
    upper = np.full(4, 3.0 * r)
    scale = load * L / E
    vol = np.array([2.0, SQRT2, SQRT2, 1.0])
    disp = np.array([2.0, 2.0 * SQRT2, -2.0 * SQRT2, 1.0])

    def objectives(X):
        f1 = L * _column_sum(X, vol)
        f2 = scale * _column_sum(1.0 / X, disp)
        return np.column_stack([f1, f2])

    def jacobian(x):
        return np.vstack([L * vol, -scale * disp / x**2])

    return Problem(
        "truss", 4, 2, Box(lower, upper), objectives, jacobian=jacobian,
        metadata={"default_epsilon": [50.0, 0.0005]},
    )


def knapsack(n: int = 30, seed: int = 0, capacity: float = 15.0, low: float = 8.0, high: float = 12.0) -> Problem:
    """Bi-objective 0/1 knapsack with unit weights, stored as minimization of negated profits.

    Profits are drawn as ``default_rng(seed).uniform(low, high, size=(2, n))``.
    """
    if n < 1:
        raise ConfigurationError("knapsack needs n >= 1")
    profits = np.random.default_rng(seed).uniform(low, high, size=(2, n))
    weights = np.ones(n)

    def objectives(X):
        return -np.column_stack([_column_sum(X, profits[0]), _column_sum(X, profits[1])])

    def constraints(X):
        binary = np.all((X == 0.0) | (X == 1.0), axis=1)
        return binary & (_column_sum(X, weights) <= capacity)

    return Problem(
        "knapsack", n, 2, Box.cube(n, 0.0, 1.0), objectives, constraints,
        kind="binary", weights=weights, capacity=float(capacity),
        metadata={"default_epsilon": [2.0, 2.0], "profits": profits, "seed": seed, "maximize": True},
    )


def example_line(lower: float = 0.0, upper: float = 5.0) -> Problem:
    """``F(x) = x`` on ``[lower, upper]``; the eps-efficient set is ``[lower, lower + eps]``."""

    def eps_set(eps):
        return lower, min(lower + float(as_vector(eps, 1)[0]), upper)

    return Problem(
        "example_line", 1, 1, Box([lower], [upper]), lambda X: X.copy(),
        jacobian=lambda x: np.ones((1, 1)),
        metadata={"default_epsilon": [1.0], "eps_efficient_interval": eps_set},
    )


def example_piecewise(alpha: float = 0.1, lower: float = -5.0, upper: float = 10.0) -> Problem:
    """``f1 = |x+1|``, ``f2 = |x-1|`` left of 1 and ``alpha |x-1|`` right of it.

    For ``eps = (e, e)`` the eps-efficient set is the interval with endpoints
    ``-1-e`` (included) and ``1+e/alpha`` (excluded).
    """
    if not 0.0 < alpha < 1.0:
        raise ConfigurationError(f"alpha must lie in (0, 1), got {alpha}")

    def objectives(X):
        x = X[:, 0]
        f2 = np.where(x <= 1.0, np.abs(x - 1.0), alpha * np.abs(x - 1.0))
        return np.column_stack([np.abs(x + 1.0), f2])

    def jacobian(x):
        return np.array([[np.sign(x[0] + 1.0)], [-1.0 if x[0] <= 1.0 else alpha]])

    def eps_set(eps):
        e = float(as_vector(eps)[0])
        return max(-1.0 - e, lower), min(1.0 + e / alpha, upper)

    return Problem(
        "example_piecewise", 1, 2, Box([lower], [upper]), objectives, jacobian=jacobian,
        metadata={"default_epsilon": [0.5, 0.5], "alpha": alpha, "eps_efficient_interval": eps_set},
    )


def constant(n: int = 2, c0: ArrayLike = (0.0, 0.0)) -> Problem:
    """``F(x) = c0`` on ``[0, 1]^n``."""
    c = as_vector(c0, name="c0")

    def objectives(X):
        return np.broadcast_to(c, (X.shape[0], c.shape[0])).copy()

    return Problem(
        "constant", n, c.shape[0], Box.cube(n, 0.0, 1.0), objectives,
        jacobian=lambda x: np.zeros((c.shape[0], n)),
        metadata={"default_epsilon": [1.0] * c.shape[0]},
    )


PROBLEMS: dict[str, Callable[..., Problem]] = {
    "tanaka": tanaka,
    "rudolph": rudolph,
    "production": production,
    "truss": truss,
    "knapsack": knapsack,
    "example_line": example_line,
    "example_piecewise": example_piecewise,
    "constant": constant,
}


def get_problem(name: str, **params) -> Problem:
    try:
        factory = PROBLEMS[name]
    except KeyError:
        raise ConfigurationError(f"unknown problem {name!r}; choose from {', '.join(PROBLEMS)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise ConfigurationError(f"bad parameters for {name}: {exc}") from None
