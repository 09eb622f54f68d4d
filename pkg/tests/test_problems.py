import math

import numpy as np
import pytest

from epsarchive.errors import ConfigurationError, DimensionError
from epsarchive.problems import (
    PROBLEMS,
    Box,
    get_problem,
    knapsack,
    production,
    rudolph,
    tanaka,
    tanaka_c1,
    tanaka_c2,
    truss,
)
from epsarchive.search import generate_uniform


def fd_jacobian(problem, x):
    J = np.empty((problem.k, problem.n))
    for j in range(problem.n):
        h = 1e-6 * (1.0 + abs(x[j]))
        up, dn = x.copy(), x.copy()
        up[j] += h
        dn[j] -= h
        J[:, j] = (problem.evaluate(up) - problem.evaluate(dn)) / (2 * h)
    return J


def gradient_rel_error(problem, x):
    """Largest per-objective relative error of the analytic gradient."""
    G, F = problem.gradient(x), fd_jacobian(problem, x)
    return max(np.linalg.norm(G[i] - F[i]) / max(np.linalg.norm(G[i]), 1e-300) for i in range(problem.k))


def interior_points(problem, rng, count, shrink=1e-3):
    box = problem.domain
    pad = shrink * box.widths
    return generate_uniform(Box(box.lower + pad, box.upper - pad), problem.feasible_batch, rng, count)


class TestTanaka:
    def test_hand_values(self):
        p = tanaka()
        assert tanaka_c2([[1, 1]])[0] == pytest.approx(0.5)
        assert tanaka_c1([[1, 1]])[0] == pytest.approx(0.9)
        assert p.feasible([1, 1])
        np.testing.assert_array_equal(p.evaluate([1, 1]), [1, 1])
        assert tanaka_c2([[math.pi, math.pi]])[0] == pytest.approx(2 * (math.pi - 0.5) ** 2)
        assert not p.feasible([math.pi, math.pi])

    def test_origin_and_axis(self):
        p = tanaka()
        assert not p.feasible([0.0, 0.0])
        # on x2 = 0 the angle is pi/2, so C1 = x1^2 - 1 - 0.1 cos(8 pi)
        assert tanaka_c1([[1.2, 0.0]])[0] == pytest.approx(1.44 - 1.1)
        assert tanaka_c1([[1.05, 0.0]])[0] >= 0 and not p.feasible([1.05, 0.0])  # C2 = 0.5525


class TestRudolph:
    def test_center_and_corner(self):
        p = rudolph()
        np.testing.assert_allclose(p.evaluate([0, 0]), [0.25, 0.25])
        np.testing.assert_allclose(p.evaluate([6, 5]), [0.25, 0.25])

    def test_tile_identity(self, rng):
        p = rudolph()
        tx, ty = p.metadata["tile"]
        base = np.column_stack([rng.uniform(-0.5, 0.5, 200), rng.uniform(-1.0, 1.0, 200)])
        F0 = p.evaluate_batch(base)
        for t1 in (-1, 0, 1):
            for t2 in (-1, 0, 1):
                F = p.evaluate_batch(base + [t1 * tx, t2 * ty])
                np.testing.assert_allclose(F, F0, rtol=0, atol=1e-12)

    def test_nine_pareto_segments(self):
        # points (t1*6 + u, t2*5) with |u| <= a all map onto the same front
        p = rudolph()
        u = np.linspace(-0.5, 0.5, 11)
        fronts = [p.evaluate_batch(np.column_stack([t1 * 6 + u, np.full(11, t2 * 5.0)]))
                  for t1 in (-1, 0, 1) for t2 in (-1, 0, 1)]
        for F in fronts:
            np.testing.assert_allclose(F, fronts[4], atol=1e-12)

    def test_bound_parameter(self):
        assert rudolph(bound=10).domain.upper.tolist() == [10, 10]
        with pytest.raises(ConfigurationError):
            rudolph(bound=6)
        with pytest.raises(ConfigurationError):
            rudolph(a=0)


class TestProduction:
    def test_origin(self):
        p = production(5)
        np.testing.assert_allclose(p.evaluate(np.zeros(5)), [0.0, 1 - 0.99**5], rtol=1e-12)
        assert 1 - 0.99**5 == pytest.approx(0.049010, abs=1e-6)

    def test_symmetry_and_sum(self, rng):
        p = production(5)
        X = rng.uniform(0, 40, (100, 5))
        swapped = X[:, [1, 0, 2, 3, 4]]
        np.testing.assert_array_equal(p.evaluate_batch(X), p.evaluate_batch(swapped))
        np.testing.assert_allclose(p.evaluate_batch(X)[:, 0], X.sum(axis=1), rtol=1e-14)

    def test_needs_three_variables(self):
        with pytest.raises(ConfigurationError):
            production(2)


class TestTruss:
    def test_hand_values(self):
        p = truss()
        r2 = math.sqrt(2)
        np.testing.assert_allclose(p.domain.lower, [1, r2, r2, 1])
        np.testing.assert_allclose(p.domain.upper, [3, 3, 3, 3])
        assert p.evaluate([1, r2, r2, 1])[0] == pytest.approx(1400)

    def test_minus_sign_on_third_bar(self):
        p = truss()
        x = np.array([2.0, 2.0, 2.0, 2.0])
        expected = (10 * 200 / 2e5) * (2 / 2 + 2 * math.sqrt(2) / 2 - 2 * math.sqrt(2) / 2 + 1 / 2)
        assert p.evaluate(x)[1] == pytest.approx(expected)
        y = x.copy()
        y[2] = 3.0
        assert p.evaluate(y)[1] > p.evaluate(x)[1]


class TestKnapsack:
    def test_values(self):
        p = knapsack(seed=3)
        c = p.metadata["profits"]
        assert c.shape == (2, 30) and c.min() >= 8 and c.max() <= 12
        np.testing.assert_array_equal(p.evaluate(np.zeros(30)), [0, 0])
        e = np.zeros(30)
        e[4] = 1
        np.testing.assert_allclose(p.evaluate(e), -c[:, 4])

    def test_capacity(self):
        p = knapsack()
        x = np.zeros(30)
        x[:15] = 1
        assert p.feasible(x)
        x[15] = 1
        assert not p.feasible(x)
        assert not p.feasible(np.full(30, 0.5))

    def test_reproducible(self):
        np.testing.assert_array_equal(knapsack(seed=7).metadata["profits"], knapsack(seed=7).metadata["profits"])
        assert not np.array_equal(knapsack(seed=7).metadata["profits"], knapsack(seed=8).metadata["profits"])


class TestExamples:
    def test_piecewise_values(self):
        p = get_problem("example_piecewise", alpha=0.1)
        np.testing.assert_allclose(p.evaluate([-1]), [0, 2])
        np.testing.assert_allclose(p.evaluate([1]), [2, 0])
        e = 0.5
        np.testing.assert_allclose(p.evaluate([1 + e / 0.1]), [2 + e / 0.1, e])
        lo, hi = p.metadata["eps_efficient_interval"](e)
        assert (lo, hi) == pytest.approx((-1.5, 6.0))

    def test_piecewise_alpha(self):
        for bad in (0.0, 1.0, 1.5):
            with pytest.raises(ConfigurationError):
                get_problem("example_piecewise", alpha=bad)

    def test_line_and_constant(self):
        line = get_problem("example_line")
        assert line.metadata["eps_efficient_interval"](1.0) == (0.0, 1.0)
        c = get_problem("constant", n=3, c0=[1.0, -2.0])
        np.testing.assert_array_equal(c.evaluate_batch(np.random.default_rng(0).random((4, 3))), [[1, -2]] * 4)


@pytest.mark.parametrize("name", ["production", "truss", "rudolph", "example_piecewise", "tanaka", "example_line"])
def test_finite_difference_gradients(name, rng):
    p = get_problem(name)
    for x in interior_points(p, rng, 100):
        if name == "rudolph":
            # stay away from tile seams where t1, t2 jump
            tiles = p.metadata["tile"]
            if np.any(np.abs(np.abs(x) - 0.5 * np.array([tiles[0] + 0.0, tiles[1]])) < 1e-3):
                continue
        if name == "example_piecewise" and min(abs(x[0] + 1), abs(x[0] - 1)) < 1e-3:
            continue
        assert gradient_rel_error(p, x) < 1e-5


@pytest.mark.parametrize("name", sorted(set(PROBLEMS) - {"knapsack"}))
def test_image_bounded(name, rng):
    p = get_problem(name)
    X = generate_uniform(p.domain, p.feasible_batch, rng, 100_000)
    F = p.evaluate_batch(X)
    assert np.all(np.isfinite(F.min(axis=0))) and np.all(np.isfinite(F.max(axis=0)))


def test_batch_independence(rng):
    for name in ("production", "truss", "rudolph"):
        p = get_problem(name)
        X = rng.uniform(p.domain.lower, p.domain.upper, (50, p.n))
        F = p.evaluate_batch(X)
        for i in (0, 17, 49):
            np.testing.assert_array_equal(p.evaluate(X[i]), F[i])


def test_registry_errors():
    with pytest.raises(ConfigurationError):
        get_problem("zdt1")
    with pytest.raises(ConfigurationError):
        get_problem("tanaka", alpha=2)
    with pytest.raises(DimensionError):
        tanaka().evaluate_batch(np.zeros((3, 3)))
    with pytest.raises(ConfigurationError):
        Box([1.0], [0.0])
