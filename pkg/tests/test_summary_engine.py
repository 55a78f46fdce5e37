"""
Tests for posterior summaries of retained draws
"""
import numpy as np
import pytest

from bass.engines.fem_engine import FemAssembler
from bass.engines.summary_engine import SummaryEngine
from bass.errors import TooFewSamplesError
from bass.models.chain import Draws, ModelVariant
from conftest import make_unit_grid


def make_draws(rng, samples=400, n=5, m=5, variant=ModelVariant.ADAPTIVE_SDE1) -> Draws:
    return Draws(
        variant=variant,
        w=rng.standard_normal((samples, n)) + np.arange(n),
        gamma=0.1 * rng.standard_normal((samples, m)),
        tau=rng.gamma(5.0, 1.0, samples),
        delta=rng.gamma(2.0, 1.0, samples),
        eta=rng.gamma(3.0, 1.0, samples),
        gamma_accepted=30,
        gamma_attempted=40,
    )


class TestInterval:
    def test_brackets_mean(self, rng):
        interval = SummaryEngine.interval(rng.standard_normal(1000))
        assert interval.lo95 <= interval.mean <= interval.hi95

    def test_constant_samples(self):
        interval = SummaryEngine.interval(np.full(200, 3.0))
        assert interval.mean == interval.lo95 == interval.hi95 == 3.0

    def test_quantiles(self):
        interval = SummaryEngine.interval(np.arange(1001.0))
        assert interval.lo95 == pytest.approx(25.0)
        assert interval.hi95 == pytest.approx(975.0)

    def test_skewed_samples_keep_raw_quantiles(self):
        samples = np.zeros(200)
        samples[-1] = 1e6
        interval = SummaryEngine.interval(samples)
        assert interval.mean == pytest.approx(5000.0)
        assert interval.lo95 == interval.hi95 == 0.0


class TestSummarize:
    def test_at_knots(self, rng):
        grid = make_unit_grid(5)
        draws = make_draws(rng)
        identity = FemAssembler.build_interpolation(grid.knots, grid)
        summary = SummaryEngine.summarize(draws, identity, identity, grid.knots)

        np.testing.assert_allclose(summary.mean, draws.w.mean(axis=0))
        np.testing.assert_allclose(summary.lambda_mean, np.exp(draws.gamma).mean(axis=0))
        assert summary.t == [0.0, 1.0, 2.0, 3.0, 4.0]
        assert summary.samples == 400
        assert summary.acceptance_gamma == pytest.approx(0.75)
        assert summary.tau.mean == pytest.approx(draws.tau.mean())
        assert summary.smoothing_ratio.mean == pytest.approx(np.mean(draws.delta / draws.tau))
        assert all(lo <= m <= hi for lo, m, hi in zip(summary.lo95, summary.mean, summary.hi95))

    def test_between_knots(self, rng):
        grid = make_unit_grid(5)
        draws = make_draws(rng)
        points = np.array([0.5, 2.25])
        psi = FemAssembler.build_interpolation(points, grid)
        omega = FemAssembler.build_interpolation(grid.knots, grid)
        summary = SummaryEngine.summarize(draws, psi, omega, points)
        expected = np.column_stack([
            0.5 * draws.w[:, 0] + 0.5 * draws.w[:, 1],
            0.75 * draws.w[:, 2] + 0.25 * draws.w[:, 3],
        ]).mean(axis=0)
        np.testing.assert_allclose(summary.mean, expected)

    def test_reduced_nu_basis(self, rng):
        grid = make_unit_grid(5)
        subgrid = FemAssembler.build_grid([0.0, 4.0], min_knots=2)
        draws = make_draws(rng, m=2)
        identity = FemAssembler.build_interpolation(grid.knots, grid)
        omega = FemAssembler.build_interpolation(grid.knots, subgrid)
        summary = SummaryEngine.summarize(draws, identity, omega, grid.knots)
        nu_mid = draws.gamma.mean(axis=1)
        assert summary.lambda_mean[2] == pytest.approx(np.exp(nu_mid).mean())

    def test_global_has_no_eta(self, rng):
        grid = make_unit_grid(5)
        draws = make_draws(rng, variant=ModelVariant.GLOBAL)
        identity = FemAssembler.build_interpolation(grid.knots, grid)
        assert SummaryEngine.summarize(draws, identity, identity, grid.knots).eta is None

    def test_too_few_samples(self, rng):
        grid = make_unit_grid(5)
        identity = FemAssembler.build_interpolation(grid.knots, grid)
        with pytest.raises(TooFewSamplesError):
            SummaryEngine.summarize(make_draws(rng, samples=99), identity, identity, grid.knots)

    def test_skewed_curve_band_is_not_widened(self, rng, caplog):
        caplog.set_level("WARNING", logger="bass.engines.summary_engine")
        grid = make_unit_grid(5)
        base = make_draws(rng, samples=200)
        w = np.array(base.w)
        w[:, 2] = 0.0
        w[-1, 2] = 1e6
        draws = Draws(variant=base.variant, w=w, gamma=base.gamma, tau=base.tau, delta=base.delta,
                      eta=base.eta, gamma_accepted=base.gamma_accepted, gamma_attempted=base.gamma_attempted)
        identity = FemAssembler.build_interpolation(grid.knots, grid)
        summary = SummaryEngine.summarize(draws, identity, identity, grid.knots)
        assert summary.mean[2] == pytest.approx(5000.0)
        assert summary.hi95[2] == 0.0
        assert "outside the 95% band at 1 point" in caplog.text
