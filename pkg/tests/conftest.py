"""
Shared fixtures: seeded generators, grid factories and dense reference matrices
"""
import numpy as np
import pytest

from bass.engines.fem_engine import FemAssembler
from bass.models.grid import Grid


def make_random_grid(rng: np.random.Generator, n: int) -> Grid:
    """Grid with spacings log-uniform in [0.1, 2]"""
    spacings = np.exp(rng.uniform(np.log(0.1), np.log(2.0), n - 1))
    knots = np.concatenate([[rng.uniform(-1.0, 1.0)], spacings]).cumsum()
    return FemAssembler.build_grid(knots)


def make_unit_grid(n: int) -> Grid:
    return FemAssembler.build_grid(np.arange(n, dtype=float))


def dense_H(knots: np.ndarray) -> np.ndarray:
    n = knots.size
    h = np.diff(knots)
    H = np.zeros((n, n))
    for i in range(1, n - 1):
        H[i, i - 1] = 1.0 / h[i - 1]
        H[i, i] = -(1.0 / h[i - 1] + 1.0 / h[i])
        H[i, i + 1] = 1.0 / h[i]
    return H


def dense_Btilde(knots: np.ndarray) -> np.ndarray:
    h = np.diff(knots)
    d = np.empty(knots.size)
    d[0] = h[0] / 2.0
    d[-1] = h[-1] / 2.0
    d[1:-1] = (h[:-1] + h[1:]) / 2.0
    return np.diag(d)


def assert_matches_dense(actual: np.ndarray, expected: np.ndarray, rtol: float = 1e-12) -> None:
    scale = np.max(np.abs(expected))
    np.testing.assert_allclose(actual, expected, rtol=rtol, atol=rtol * scale)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_grid():
    return make_random_grid


@pytest.fixture
def unit_grid():
    return make_unit_grid
