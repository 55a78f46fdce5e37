"""
Metropolis-within-Gibbs sampler for the global and adaptive smoothing spline models
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from bass.engines.fem_engine import FemAssembler
from bass.engines.gamma_engine import GammaStep, RandomWalkGammaStep
from bass.engines.gibbs_engine import GibbsConditionals
from bass.engines.random_streams import RandomStreams
from bass.engines.summary_engine import SummaryEngine
from bass.errors import ChainError, FactorizationError, InputError, ModeSearchError
from bass.models.chain import (
    ChainState,
    Draws,
    ErrorFamily,
    FitSummary,
    KnotPolicy,
    ModelDesign,
    ModelSpec,
    ModelVariant,
    Observations,
)
from bass.models.grid import BandedSymmetricMatrix

logger = logging.getLogger(__name__)


class ChainRunner:
    """Builds the fixed design of a fit and runs its chain"""

    @staticmethod
    def prepare_design(spec: ModelSpec, data: Observations) -> ModelDesign:
        """
        Knot mesh, basis matrices and prior precisions shared by every sweep

        Raises:
            DegenerateGridError: fewer than 4 distinct t values
        """
        if spec.knot_policy == KnotPolicy.REGULAR:
            # the data still need 4 distinct locations to identify the spline
            FemAssembler.build_grid(data.t)
            grid = FemAssembler.build_grid(np.linspace(data.t.min(), data.t.max(), spec.knot_count))
        else:
            grid = FemAssembler.build_grid(data.t)

        n = grid.size
        if spec.variant == ModelVariant.GLOBAL:
            m = n
        else:
            m = spec.default_subknots(n)
        if not 2 <= m <= n:
            raise InputError(f"subknot count {m} must lie in [2, {n}]")

        if m == n:
            subgrid = grid
        else:
            subgrid = FemAssembler.build_grid(np.quantile(grid.knots, np.linspace(0.0, 1.0, m)), min_knots=2)

        kappa = spec.kappa if spec.kappa is not None else 2.0 / grid.span
        log_pdet_base = FemAssembler.log_pdet_Q_global(grid) if spec.variant == ModelVariant.ADAPTIVE_SDE2 else 0.0

        return ModelDesign(
            grid=grid,
            psi=FemAssembler.build_interpolation(data.t, grid),
            subgrid=subgrid,
            omega=FemAssembler.build_interpolation(grid.knots, subgrid),
            R=FemAssembler.build_R(subgrid, kappa),
            q_global=FemAssembler.build_Q_global(grid),
            btilde=FemAssembler.btilde_diagonal(grid),
            kappa=kappa,
            log_pdet_base=log_pdet_base,
        )

    @staticmethod
    def initial_state(spec: ModelSpec, data: Observations, design: ModelDesign) -> ChainState:
        knots = design.grid.knots
        if spec.knot_policy == KnotPolicy.AT_DATA:
            index = np.searchsorted(knots, data.t)
            w = np.bincount(index, data.y, minlength=knots.size) / np.bincount(index, minlength=knots.size)
        else:
            slope, intercept = np.polyfit(data.t, data.y, 1)
            w = intercept + slope * knots

        variance = float(np.var(data.y))
        gamma = np.zeros(design.n_subknots)
        return ChainState(
            w=w,
            gamma=gamma,
            nu=design.omega.matvec(gamma),
            tau=1.0 / variance if variance > 0 else 1.0,
            delta=1.0,
            eta=1.0,
            rho=np.ones(data.n_obs),
        )

    @staticmethod
    def precision(variant: ModelVariant, design: ModelDesign, nu: np.ndarray) -> BandedSymmetricMatrix:
        """Q_lambda for the current nu; e^nu = lambda^2 under SDE-I and lambda under SDE-II"""
        if variant == ModelVariant.GLOBAL:
            return design.q_global
        # nu is clamped so lambda stays finite and positive
        if variant == ModelVariant.ADAPTIVE_SDE1:
            return FemAssembler.build_Q_sde1(design.grid, np.exp(np.clip(nu, -60.0, 60.0) / 2.0))
        return FemAssembler.build_Q_sde2(design.grid, np.exp(np.clip(nu, -30.0, 30.0)))

    @staticmethod
    def run_chain(spec: ModelSpec, data: Observations, design: Optional[ModelDesign] = None) -> Draws:
        """
        Run iterations sweeps in the order w, tau, rho, gamma, delta, eta

        Args:
            spec: Model and schedule settings
            data: Observations to fit
            design: Precomputed design; built from spec and data when omitted

        Returns:
            Draws of the retained sweeps

        Raises:
            ChainError: the w conditional could not be factorized
        """
        if design is None:
            design = ChainRunner.prepare_design(spec, data)
        logger.info(f"Starting {spec.variant.value} chain: {design.n_knots} knots, "
                    f"{design.n_subknots} subknots, kappa={design.kappa:.6g}")

        rng = RandomStreams.chain(spec.seed)
        state = ChainRunner.initial_state(spec, data, design)
        Q = ChainRunner.precision(spec.variant, design, state.nu)
        walker = RandomWalkGammaStep(design.n_subknots) if spec.variant == ModelVariant.ADAPTIVE_SDE2 else None

        retained = spec.retained
        w_draws = np.empty((retained, design.n_knots))
        gamma_draws = np.empty((retained, design.n_subknots))
        tau_draws = np.empty(retained)
        delta_draws = np.empty(retained)
        eta_draws = np.empty(retained)
        accepted = attempted = mode_failures = 0
        kept = 0

        for sweep in range(spec.iterations):
            try:
                state.w = GibbsConditionals.sample_w(state, data, design.psi, Q, rng)
            except FactorizationError as exc:
                raise ChainError(f"spline weights not identified: {exc}", sweep=sweep) from exc

            state.tau = GibbsConditionals.sample_tau(state, data, design.psi, spec, rng)
            if spec.error_family == ErrorFamily.CAUCHY:
                state.rho = GibbsConditionals.sample_rho(state, data, design.psi, spec, rng)

            if spec.variant == ModelVariant.ADAPTIVE_SDE1:
                s = GammaStep.second_diffs(state.w, design.grid).s
                try:
                    state, ok = GammaStep.mh_update_gamma(
                        state, s, design.R, design.omega, rng,
                        tol=spec.mode_tolerance, max_iter=spec.mode_max_iter)
                    attempted += 1
                    accepted += int(ok)
                except ModeSearchError as exc:
                    mode_failures += 1
                    logger.debug(f"sweep {sweep}: gamma step skipped: {exc}")
            elif spec.variant == ModelVariant.ADAPTIVE_SDE2:
                state, ok, tried = walker.sweep(state, design, rng)
                walker.end_sweep(sweep, spec.burnin)
                accepted += ok
                attempted += tried

            Q = ChainRunner.precision(spec.variant, design, state.nu)
            state.delta = GibbsConditionals.sample_delta(state, Q, spec, rng)
            if spec.variant != ModelVariant.GLOBAL:
                state.eta = GibbsConditionals.sample_eta(state, design.R, spec, rng)

            if sweep >= spec.burnin and (sweep - spec.burnin + 1) % spec.thinning == 0:
                w_draws[kept] = state.w
                gamma_draws[kept] = state.gamma
                tau_draws[kept] = state.tau
                delta_draws[kept] = state.delta
                eta_draws[kept] = state.eta
                kept += 1

        draws = Draws(
            variant=spec.variant,
            w=w_draws[:kept],
            gamma=gamma_draws[:kept],
            tau=tau_draws[:kept],
            delta=delta_draws[:kept],
            eta=eta_draws[:kept],
            gamma_accepted=accepted,
            gamma_attempted=attempted,
            mode_failures=mode_failures,
        )
        rate = draws.acceptance_rate
        logger.info(f"Chain finished: {kept} draws kept, gamma acceptance "
                    f"{'n/a' if rate is None else f'{rate:.3f}'}, {mode_failures} mode-search failures")
        return draws

    @staticmethod
    def fit(spec: ModelSpec, data: Observations,
            eval_points: Optional[Sequence[float]] = None) -> Tuple[ModelDesign, Draws, FitSummary]:
        """Run a chain and summarize it at the knots or at the given evaluation points"""
        design = ChainRunner.prepare_design(spec, data)
        draws = ChainRunner.run_chain(spec, data, design)
        points = design.grid.knots if eval_points is None else np.asarray(eval_points, dtype=float)
        psi_eval = FemAssembler.build_interpolation(points, design.grid)
        return design, draws, SummaryEngine.summarize(draws, psi_eval, design.omega, points)
