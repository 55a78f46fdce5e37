"""
Tests for banded Cholesky, solves, log-determinants and canonical sampling
"""
import numpy as np
import pytest

from bass.engines.fem_engine import FemAssembler
from bass.engines.gmrf_engine import GmrfEngine
from bass.engines.random_streams import RandomStreams
from bass.errors import FactorizationError, InputError
from bass.models.gaussian import CanonicalGaussian
from bass.models.grid import BandedSymmetricMatrix
from conftest import assert_matches_dense, make_random_grid, make_unit_grid


def diagonal(values) -> BandedSymmetricMatrix:
    values = np.asarray(values, dtype=float)
    return BandedSymmetricMatrix(bands=values[np.newaxis, :])


def random_pd(rng, n: int) -> BandedSymmetricMatrix:
    """Q_global plus a positive diagonal: banded, bandwidth 2, strictly PD"""
    grid = make_random_grid(rng, n)
    bands = FemAssembler.build_Q_global(grid).padded(2)
    bands[0] += rng.uniform(0.5, 2.0, n)
    return BandedSymmetricMatrix(bands=bands)


def tridiagonal_pd(n: int) -> BandedSymmetricMatrix:
    bands = np.zeros((2, n))
    bands[0] = 2.5
    bands[1, :-1] = -1.0
    return BandedSymmetricMatrix(bands=bands)


class TestCholeskyBanded:
    def test_identity(self):
        chol = GmrfEngine.cholesky_banded(diagonal(np.ones(5)))
        np.testing.assert_array_equal(chol.to_dense(), np.eye(5))

    def test_diagonal(self):
        chol = GmrfEngine.cholesky_banded(diagonal([4, 9, 16, 25]))
        np.testing.assert_allclose(chol.factor[0], [2, 3, 4, 5])

    def test_reconstructs(self, rng):
        m = random_pd(rng, 12)
        L = GmrfEngine.cholesky_banded(m).to_dense()
        dense = m.to_dense()
        assert np.max(np.abs(L @ L.T - dense)) <= 1e-10 * np.max(np.abs(dense))

    def test_keeps_bandwidth(self, rng):
        chol = GmrfEngine.cholesky_banded(random_pd(rng, 9))
        assert chol.bandwidth == 2
        assert np.all(chol.factor[0] > 0)

    def test_indefinite_reports_pivot(self):
        with pytest.raises(FactorizationError) as info:
            GmrfEngine.cholesky_banded(diagonal([1.0, -1.0, 1.0]))
        assert info.value.pivot == 1

    def test_intrinsic_matrix_rejected(self):
        with pytest.raises(FactorizationError):
            GmrfEngine.cholesky_banded(FemAssembler.build_Q_global(make_unit_grid(8)))

    def test_non_finite_rejected(self):
        with pytest.raises(FactorizationError):
            GmrfEngine.cholesky_banded(diagonal([1.0, np.inf, 1.0]))


class TestSolveBanded:
    def test_identity(self):
        chol = GmrfEngine.cholesky_banded(diagonal(np.ones(4)))
        np.testing.assert_allclose(GmrfEngine.solve_banded(chol, [1, 2, 3, 4]), [1, 2, 3, 4])

    def test_diagonal(self):
        chol = GmrfEngine.cholesky_banded(diagonal(np.full(4, 2.0)))
        np.testing.assert_allclose(GmrfEngine.solve_banded(chol, [2, 4, 6, 8]), [1, 2, 3, 4])

    def test_residual(self, rng):
        for _ in range(20):
            m = random_pd(rng, 12)
            rhs = rng.standard_normal(12)
            x = GmrfEngine.solve_banded(GmrfEngine.cholesky_banded(m), rhs)
            assert np.max(np.abs(m.matvec(x) - rhs)) <= 1e-9 * np.max(np.abs(rhs))

    def test_dimension_mismatch(self):
        chol = GmrfEngine.cholesky_banded(diagonal(np.ones(4)))
        with pytest.raises(InputError):
            GmrfEngine.solve_banded(chol, np.ones(3))


class TestLogdetBanded:
    def test_identity(self):
        assert GmrfEngine.logdet_banded(GmrfEngine.cholesky_banded(diagonal(np.ones(3)))) == 0.0

    def test_diagonal(self):
        chol = GmrfEngine.cholesky_banded(diagonal(np.full(3, np.e)))
        assert GmrfEngine.logdet_banded(chol) == pytest.approx(3.0)

    def test_dense_oracle(self, rng):
        for _ in range(10):
            m = random_pd(rng, 8)
            expected = np.sum(np.log(np.linalg.eigvalsh(m.to_dense())))
            assert GmrfEngine.logdet_banded(GmrfEngine.cholesky_banded(m)) == pytest.approx(expected, abs=1e-8)


class TestSampleCanonical:
    DRAWS = 20000

    def draws(self, g: CanonicalGaussian, seed: int) -> np.ndarray:
        rng = RandomStreams.generator(seed, (7,))
        chol, mean = GmrfEngine.factor_canonical(g)
        return np.array([GmrfEngine.draw_from_factor(chol, mean, rng) for _ in range(self.DRAWS)])

    def test_standard_normal(self):
        x = self.draws(CanonicalGaussian(precision=diagonal(np.ones(3)), b=np.zeros(3)), 1)
        assert np.all(np.abs(x.mean(axis=0)) < 4.0 / np.sqrt(self.DRAWS))
        np.testing.assert_allclose(x.var(axis=0), 1.0, rtol=0.05)

    def test_one_dimensional(self):
        x = self.draws(CanonicalGaussian(precision=diagonal([4.0]), b=[8.0]), 2)[:, 0]
        assert abs(x.mean() - 2.0) < 4.0 * 0.5 / np.sqrt(self.DRAWS)
        assert x.std() == pytest.approx(0.5, rel=0.05)

    def test_tridiagonal_covariance(self):
        m = tridiagonal_pd(5)
        x = self.draws(CanonicalGaussian(precision=m, b=np.zeros(5)), 3)
        expected = np.diag(np.linalg.inv(m.to_dense()))
        np.testing.assert_allclose(np.var(x, axis=0), expected, rtol=0.05)

    def test_quadratic_form_mean(self):
        m = tridiagonal_pd(5)
        b = np.array([1.0, -2.0, 0.5, 0.0, 3.0])
        g = CanonicalGaussian(precision=m, b=b)
        mu = np.linalg.solve(m.to_dense(), b)
        x = self.draws(g, 4)[:10000]
        stats = np.einsum("ij,jk,ik->i", x - mu, m.to_dense(), x - mu)
        assert stats.mean() == pytest.approx(5.0, rel=0.05)

    def test_sample_canonical_matches_factor_path(self):
        g = CanonicalGaussian(precision=tridiagonal_pd(6), b=np.arange(6.0))
        a = GmrfEngine.sample_canonical(g, RandomStreams.generator(11))
        chol, mean = GmrfEngine.factor_canonical(g)
        b = GmrfEngine.draw_from_factor(chol, mean, RandomStreams.generator(11))
        np.testing.assert_array_equal(a, b)

    def test_deterministic(self):
        g = CanonicalGaussian(precision=tridiagonal_pd(6), b=np.ones(6))
        a = GmrfEngine.sample_canonical(g, RandomStreams.generator(3, (1, 2)))
        b = GmrfEngine.sample_canonical(g, RandomStreams.generator(3, (1, 2)))
        np.testing.assert_array_equal(a, b)


class TestQuadForm:
    def test_null_space(self):
        Q = FemAssembler.build_Q_global(make_unit_grid(9))
        assert abs(GmrfEngine.quad_form(Q, np.ones(9))) < 1e-10

    def test_identity(self):
        assert GmrfEngine.quad_form(diagonal([1.0, 1.0]), [3.0, 4.0]) == pytest.approx(25.0)

    def test_dense_oracle(self, rng):
        m = random_pd(rng, 10)
        x = rng.standard_normal(10)
        assert_matches_dense(np.array([GmrfEngine.quad_form(m, x)]), np.array([x @ m.to_dense() @ x]))

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            GmrfEngine.quad_form(diagonal(np.ones(3)), np.ones(4))


class TestRandomStreams:
    def test_same_key_same_stream(self):
        a = RandomStreams.generator(5, (1, 2, 0)).standard_normal(4)
        b = RandomStreams.generator(5, (1, 2, 0)).standard_normal(4)
        np.testing.assert_array_equal(a, b)

    def test_keys_split_streams(self):
        a = RandomStreams.dataset(5, 2, 0).standard_normal(4)
        b = RandomStreams.dataset(5, 2, 1).standard_normal(4)
        assert not np.array_equal(a, b)

    def test_fit_seeds_differ_by_method(self):
        seeds = {RandomStreams.fit_seed(0, 2, 0, k) for k in range(3)}
        assert len(seeds) == 3
        assert RandomStreams.fit_seed(0, 2, 0, 1) == RandomStreams.fit_seed(0, 2, 0, 1)
