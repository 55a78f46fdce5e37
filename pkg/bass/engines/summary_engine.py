"""
Posterior summaries of retained draws
"""
import logging

import numpy as np

from bass.errors import TooFewSamplesError
from bass.models.chain import Draws, FitSummary, Interval, ModelVariant
from bass.models.grid import InterpolationMatrix

logger = logging.getLogger(__name__)


class SummaryEngine:
    """Turns Draws into pointwise curve bands and hyperparameter intervals"""

    MIN_SAMPLES = 100
    QUANTILES = (0.025, 0.975)

    @staticmethod
    def evaluate(values: np.ndarray, basis: InterpolationMatrix) -> np.ndarray:
        """Apply the basis to every row of a (samples, knots) array"""
        return (values[:, basis.columns] * basis.weights).sum(axis=-1)

    @staticmethod
    def interval(samples: np.ndarray) -> Interval:
        mean = float(np.mean(samples))
        lo, hi = np.quantile(samples, SummaryEngine.QUANTILES)
        return Interval(mean=mean, lo95=float(lo), hi95=float(hi))

    @staticmethod
    def summarize(draws: Draws, psi_eval: InterpolationMatrix, omega: InterpolationMatrix,
                  points: np.ndarray) -> FitSummary:
        """
        Pointwise mean and central 95% band of f, posterior mean of lambda

        Args:
            draws: Retained samples of one chain
            psi_eval: Knots -> evaluation points basis matrix
            omega: Subknots -> knots basis matrix of nu
            points: Evaluation points, one per row of psi_eval

        Returns:
            FitSummary with the empirical 2.5% and 97.5% quantiles as the band
        """
        if draws.n_samples < SummaryEngine.MIN_SAMPLES:
            raise TooFewSamplesError(
                f"{draws.n_samples} retained draws, need at least {SummaryEngine.MIN_SAMPLES}")

        curves = SummaryEngine.evaluate(draws.w, psi_eval)
        mean = curves.mean(axis=0)
        lo, hi = np.quantile(curves, SummaryEngine.QUANTILES, axis=0)
        outside = int(np.sum((mean < lo) | (mean > hi)))
        if outside:
            logger.warning(f"posterior mean of f lies outside the 95% band at {outside} point(s); "
                           f"the draws are strongly skewed there")

        nu_knots = SummaryEngine.evaluate(draws.gamma, omega)
        lam = np.exp(SummaryEngine.evaluate(nu_knots, psi_eval))

        return FitSummary(
            t=[float(x) for x in points],
            mean=mean.tolist(),
            lo95=lo.tolist(),
            hi95=hi.tolist(),
            lambda_mean=lam.mean(axis=0).tolist(),
            tau=SummaryEngine.interval(draws.tau),
            delta=SummaryEngine.interval(draws.delta),
            eta=None if draws.variant == ModelVariant.GLOBAL else SummaryEngine.interval(draws.eta),
            smoothing_ratio=SummaryEngine.interval(draws.delta / draws.tau),
            acceptance_gamma=draws.acceptance_rate,
            samples=draws.n_samples,
        )
