"""
Conjugate full conditionals of the spline weights, precisions and Cauchy mixing weights
"""
import numpy as np

from bass.engines.gmrf_engine import GmrfEngine
from bass.models.chain import ChainState, ErrorFamily, ModelSpec, Observations
from bass.models.gaussian import CanonicalGaussian
from bass.models.grid import BandedSymmetricMatrix, InterpolationMatrix


class GibbsConditionals:
    """Exact draws from the Gaussian and Gamma full conditionals; Gamma is shape/rate"""

    @staticmethod
    def residuals(state: ChainState, data: Observations, psi: InterpolationMatrix) -> np.ndarray:
        return data.y - psi.matvec(state.w)

    @staticmethod
    def w_conditional(state: ChainState, data: Observations, psi: InterpolationMatrix,
                      Q: BandedSymmetricMatrix) -> CanonicalGaussian:
        """precision tau Psi' diag(rho) Psi + delta Q, canonical mean tau Psi' diag(rho) y"""
        weights = state.tau * state.rho
        return CanonicalGaussian(
            precision=psi.weighted_gram(weights).plus(Q.scaled(state.delta)),
            b=psi.rmatvec(weights * data.y),
        )

    @staticmethod
    def sample_w(state: ChainState, data: Observations, psi: InterpolationMatrix,
                 Q: BandedSymmetricMatrix, rng: np.random.Generator) -> np.ndarray:
        """
        Draw the spline weights from their Gaussian full conditional

        Raises:
            FactorizationError: if the data cannot pin down the null space of Q
        """
        return GmrfEngine.sample_canonical(GibbsConditionals.w_conditional(state, data, psi, Q), rng)

    @staticmethod
    def sample_tau(state: ChainState, data: Observations, psi: InterpolationMatrix,
                   spec: ModelSpec, rng: np.random.Generator) -> float:
        eps = GibbsConditionals.residuals(state, data, psi)
        shape = data.n_obs / 2.0 + spec.a_tau
        rate = np.sum(state.rho * eps ** 2) / 2.0 + spec.b_tau
        return float(rng.gamma(shape, 1.0 / rate))

    @staticmethod
    def sample_delta(state: ChainState, Q: BandedSymmetricMatrix, spec: ModelSpec,
                     rng: np.random.Generator) -> float:
        # rank of Q is n - 2
        shape = (Q.size - 2) / 2.0 + spec.a_delta
        rate = max(GmrfEngine.quad_form(Q, state.w), 0.0) / 2.0 + spec.b_delta
        return float(rng.gamma(shape, 1.0 / rate))

    @staticmethod
    def sample_eta(state: ChainState, R: BandedSymmetricMatrix, spec: ModelSpec,
                   rng: np.random.Generator) -> float:
        # R is full rank on the m subknots
        shape = R.size / 2.0 + spec.a_eta
        rate = max(GmrfEngine.quad_form(R, state.gamma), 0.0) / 2.0 + spec.b_eta
        return float(rng.gamma(shape, 1.0 / rate))

    @staticmethod
    def sample_rho(state: ChainState, data: Observations, psi: InterpolationMatrix,
                   spec: ModelSpec, rng: np.random.Generator) -> np.ndarray:
        """
        Mixing weights of the Cauchy scale mixture, rho_i ~ Gamma(1, 0.5 + tau eps_i^2 / 2)

        Under Gaussian errors every weight is 1.
        """
        if spec.error_family == ErrorFamily.GAUSSIAN:
            return np.ones(data.n_obs)
        eps = GibbsConditionals.residuals(state, data, psi)
        rate = 0.5 + state.tau * eps ** 2 / 2.0
        return rng.gamma(1.0, 1.0 / rate)
