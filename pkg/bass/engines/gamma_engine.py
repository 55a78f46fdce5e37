"""
Updates of the log-smoothing weights gamma: the GMRF-approximation independence
sampler for SDE-I and an adaptive single-site random walk for SDE-II
"""
from typing import Tuple

import numpy as np

from bass.engines.fem_engine import FemAssembler
from bass.engines.gmrf_engine import GmrfEngine
from bass.errors import FactorizationError, ModeSearchError
from bass.models.chain import ChainState, ModeResult, ModelDesign, SecondDiffs
from bass.models.gaussian import CanonicalGaussian
from bass.models.grid import BandedSymmetricMatrix, Grid, InterpolationMatrix


NU_CLAMP = 30.0


class GammaStep:
    """Independence Metropolis-Hastings for gamma with a proposal built at the conditional mode"""

    # Halvings tried before a Newton step is declared stalled
    MAX_HALVINGS = 30
    # Relative slack on log F below which a decrease counts as roundoff
    ROUNDOFF = 1e-12

    @staticmethod
    def second_diffs(w: np.ndarray, grid: Grid) -> SecondDiffs:
        """
        w-tilde = H w and s_i = w-tilde_i^2 / B-tilde_ii

        With e^nu_i = lambda_i^2, sum_i e^nu_i s_i equals w' Q_sde1 w.
        """
        w = np.asarray(w, dtype=float)
        wtilde = FemAssembler.apply_H(grid, w)
        return SecondDiffs(wtilde=wtilde, s=wtilde ** 2 / FemAssembler.btilde_diagonal(grid))

    @staticmethod
    def gamma_taylor_coeffs(nu0: np.ndarray, s: np.ndarray, delta: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Coefficients of the second-order expansion of nu/2 - delta e^nu s / 2 around nu0

        The expansion is const + b nu - c nu^2 / 2. Entries at the two end knots
        are zero since their likelihood terms are dropped.
        """
        nu_c = np.clip(np.asarray(nu0, dtype=float), -NU_CLAMP, NU_CLAMP)
        curvature = delta * np.exp(nu_c) * np.asarray(s, dtype=float) / 2.0
        b = 0.5 - curvature * (1.0 - nu_c)
        c = curvature.copy()
        b[0] = b[-1] = 0.0
        c[0] = c[-1] = 0.0
        return b, c

    @staticmethod
    def log_target_gamma(gamma: np.ndarray, state: ChainState, s: np.ndarray,
                         R: BandedSymmetricMatrix, omega: InterpolationMatrix) -> float:
        """log F(gamma | w, delta, eta) without constants; -inf when e^nu overflows"""
        nu = omega.matvec(gamma)[1:-1]
        with np.errstate(over="ignore", invalid="ignore"):
            likelihood = np.sum(nu / 2.0 - state.delta * np.exp(nu) * s[1:-1] / 2.0)
        value = likelihood - state.eta / 2.0 * GmrfEngine.quad_form(R, gamma)
        if not np.isfinite(value):
            return -np.inf
        return float(value)

    @staticmethod
    def proposal(gamma0: np.ndarray, state: ChainState, s: np.ndarray,
                 R: BandedSymmetricMatrix, omega: InterpolationMatrix) -> CanonicalGaussian:
        """Gaussian approximation with precision eta R + Omega' C Omega and canonical mean Omega' b"""
        b, c = GammaStep.gamma_taylor_coeffs(omega.matvec(gamma0), s, state.delta)
        return CanonicalGaussian(
            precision=R.scaled(state.eta).plus(omega.weighted_gram(c)),
            b=omega.rmatvec(b),
        )

    @staticmethod
    def find_gamma_mode(state: ChainState, s: np.ndarray, R: BandedSymmetricMatrix,
                        omega: InterpolationMatrix, tol: float = 1e-6, max_iter: int = 50) -> ModeResult:
        """
        Newton-Raphson search for the mode of log F, starting at the current gamma

        Each iterate solves the proposal system built at the previous one, which
        is exactly a Newton step; the step is halved while it would lower log F.
        Converges when the step is below tol in max norm, or when halving stalls
        with a Newton decrement below tol.

        Raises:
            ModeSearchError: if a proposal precision is not positive definite
        """
        gamma = np.array(state.gamma, dtype=float)
        current = GammaStep.log_target_gamma(gamma, state, s, R, omega)

        for iteration in range(1, max_iter + 1):
            g = GammaStep.proposal(gamma, state, s, R, omega)
            try:
                _, target = GmrfEngine.factor_canonical(g)
            except FactorizationError as exc:
                raise ModeSearchError(f"proposal precision not positive definite: {exc}") from exc

            step = target - gamma
            if np.max(np.abs(step)) < tol:
                return ModeResult(gamma=target, converged=True, iterations=iteration)

            scale = 1.0
            candidate = gamma + step
            value = GammaStep.log_target_gamma(candidate, state, s, R, omega)
            floor = current - GammaStep.ROUNDOFF * (1.0 + abs(current))
            halvings = 0
            while value < floor and halvings < GammaStep.MAX_HALVINGS:
                scale /= 2.0
                candidate = gamma + scale * step
                value = GammaStep.log_target_gamma(candidate, state, s, R, omega)
                halvings += 1
            if value < floor:
                # a stall whose Newton decrement is below evaluation noise is the mode
                decrement = 0.5 * GmrfEngine.quad_form(g.precision, step)
                if decrement < tol:
                    return ModeResult(gamma=target, converged=True, iterations=iteration)
                return ModeResult(gamma=gamma, converged=False, iterations=iteration)

            gamma, current = candidate, value

        return ModeResult(gamma=gamma, converged=False, iterations=max_iter)

    @staticmethod
    def log_acceptance(gamma_new: np.ndarray, gamma_old: np.ndarray, state: ChainState, s: np.ndarray,
                       R: BandedSymmetricMatrix, omega: InterpolationMatrix, g: CanonicalGaussian) -> float:
        """log of F(gamma*) P(gamma) / (F(gamma) P(gamma*)) for a fixed proposal P"""
        log_f_new = GammaStep.log_target_gamma(gamma_new, state, s, R, omega)
        log_f_old = GammaStep.log_target_gamma(gamma_old, state, s, R, omega)
        if log_f_new == -np.inf:
            return -np.inf
        return (log_f_new - log_f_old) + (GmrfEngine.canonical_log_kernel(g, gamma_old)
                                          - GmrfEngine.canonical_log_kernel(g, gamma_new))

    @staticmethod
    def mh_update_gamma(state: ChainState, s: np.ndarray, R: BandedSymmetricMatrix,
                        omega: InterpolationMatrix, rng: np.random.Generator,
                        tol: float = 1e-6, max_iter: int = 50) -> Tuple[ChainState, bool]:
        """
        One independence-sampler update of gamma

        Raises:
            ModeSearchError: if the proposal cannot be built; the caller keeps gamma
        """
        mode = GammaStep.find_gamma_mode(state, s, R, omega, tol=tol, max_iter=max_iter)
        if not mode.converged:
            raise ModeSearchError(f"mode search did not converge in {mode.iterations} iterations")

        g = GammaStep.proposal(mode.gamma, state, s, R, omega)
        try:
            chol, mean = GmrfEngine.factor_canonical(g)
        except FactorizationError as exc:
            raise ModeSearchError(f"proposal precision not positive definite: {exc}") from exc

        gamma_new = GmrfEngine.draw_from_factor(chol, mean, rng)
        log_alpha = GammaStep.log_acceptance(gamma_new, state.gamma, state, s, R, omega, g)
        if np.log(rng.uniform()) < log_alpha:
            return state.model_copy(update={"gamma": gamma_new, "nu": omega.matvec(gamma_new)}), True
        return state, False


class RandomWalkGammaStep:
    """
    Single-site Gaussian random-walk Metropolis for gamma under SDE-II

    Each site's step starts at 2.4 / sqrt(curvature) of the log target along
    that site and is recalibrated once after the first burn-in batch. Later
    burn-in batches move the log step by a Robbins-Monro correction
    proportional to the gap between the batch acceptance rate and the target.
    Steps stay fixed after burn-in.
    """

    # Finite-difference offset for the curvature of the log target
    CURVATURE_OFFSET = 1e-3
    ADAPT_GAIN = 2.0
    LOG_STEP_BOUNDS = (np.log(1e-6), np.log(10.0))

    def __init__(self, n_sites: int, initial_step: float = 0.5, target_rate: float = 0.44,
                 batch_size: int = 50):
        self.log_steps = np.full(n_sites, np.log(initial_step))
        self.target_rate = target_rate
        self.batch_size = batch_size
        self.batches = 0
        self._accepted = np.zeros(n_sites, dtype=int)
        self._attempted = np.zeros(n_sites, dtype=int)
        self._needs_calibration = True

    @property
    def steps(self) -> np.ndarray:
        return np.exp(self.log_steps)

    @staticmethod
    def energy(grid: Grid, btilde: np.ndarray, lam: np.ndarray, w: np.ndarray) -> float:
        """w' Q_sde2(lambda) w = sum_i (H (lambda w))_i^2 / B-tilde_ii"""
        scaled = FemAssembler.apply_H(grid, lam * w)
        return float(np.sum(scaled[1:-1] ** 2 / btilde[1:-1]))

    @staticmethod
    def log_target(gamma: np.ndarray, state: ChainState, design: ModelDesign) -> float:
        """
        log [w | delta, gamma] + log [gamma | eta] up to gamma-free constants

        The intrinsic determinant of Lambda H' B-tilde^-1 H Lambda contributes
        sum(nu) plus the fixed log-determinant of the global precision.
        """
        nu = design.omega.matvec(gamma)
        with np.errstate(over="ignore", invalid="ignore"):
            lam = np.exp(nu)
            if not np.all(np.isfinite(lam)) or np.any(lam <= 0):
                return -np.inf
            energy = RandomWalkGammaStep.energy(design.grid, design.btilde, lam, state.w)
            value = (np.sum(nu) + 0.5 * design.log_pdet_base - state.delta / 2.0 * energy
                     - state.eta / 2.0 * GmrfEngine.quad_form(design.R, gamma))
        if not np.isfinite(value):
            return -np.inf
        return float(value)

    def calibrate(self, state: ChainState, design: ModelDesign) -> None:
        """Set each step from the curvature of the log target along its site; flat or convex sites keep theirs"""
        gamma = np.array(state.gamma, dtype=float)
        center = self.log_target(gamma, state, design)
        offset = self.CURVATURE_OFFSET
        for k in range(gamma.size):
            up, down = gamma.copy(), gamma.copy()
            up[k] += offset
            down[k] -= offset
            second = self.log_target(up, state, design) - 2.0 * center + self.log_target(down, state, design)
            curvature = -second / offset ** 2
            if np.isfinite(curvature) and curvature > 0:
                self.log_steps[k] = np.log(2.4 / np.sqrt(curvature))
        self.log_steps = np.clip(self.log_steps, *self.LOG_STEP_BOUNDS)

    def sweep(self, state: ChainState, design: ModelDesign,
              rng: np.random.Generator) -> Tuple[ChainState, int, int]:
        """Visit every gamma site once; returns the new state, accepted and attempted counts"""
        if self._needs_calibration:
            self.calibrate(state, design)
            self._needs_calibration = False

        gamma = np.array(state.gamma, dtype=float)
        current = self.log_target(gamma, state, design)
        accepted = 0

        for k in range(gamma.size):
            candidate = gamma.copy()
            candidate[k] += self.steps[k] * rng.standard_normal()
            value = self.log_target(candidate, state, design)
            self._attempted[k] += 1
            if np.log(rng.uniform()) < value - current:
                gamma, current = candidate, value
                self._accepted[k] += 1
                accepted += 1

        new_state = state.model_copy(update={"gamma": gamma, "nu": design.omega.matvec(gamma)})
        return new_state, accepted, gamma.size

    def end_sweep(self, sweep: int, burnin: int) -> None:
        """Adapt the step sizes after each full batch of burn-in sweeps"""
        if sweep >= burnin or (sweep + 1) % self.batch_size != 0:
            return
        self.batches += 1
        if self.batches == 1:
            self._needs_calibration = True
        else:
            rates = self._accepted / np.maximum(self._attempted, 1)
            gap = rates - self.target_rate
            self.log_steps = np.clip(self.log_steps + self.ADAPT_GAIN * gap / np.sqrt(self.batches - 1),
                                     *self.LOG_STEP_BOUNDS)
        self._accepted[:] = 0
        self._attempted[:] = 0
