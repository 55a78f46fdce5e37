"""
Data models for the posterior hierarchy: model settings, chain state, draws and summaries
"""
from enum import Enum
from typing import Optional, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from bass.models.grid import Grid, BandedSymmetricMatrix, InterpolationMatrix, frozen_array


class ModelVariant(str, Enum):
    """Prior on the spline weights"""
    GLOBAL = "global"
    ADAPTIVE_SDE1 = "sde1"
    ADAPTIVE_SDE2 = "sde2"


class ErrorFamily(str, Enum):
    """Observation error distribution"""
    GAUSSIAN = "gaussian"
    CAUCHY = "cauchy"


class KnotPolicy(str, Enum):
    """Where the spline knots are placed"""
    AT_DATA = "at_data"
    REGULAR = "regular"


class ModelSpec(BaseModel):
    """Complete description of one model fit"""
    model_config = ConfigDict(extra="forbid")

    variant: ModelVariant = Field(ModelVariant.ADAPTIVE_SDE1, description="Spline prior variant")
    error_family: ErrorFamily = Field(ErrorFamily.GAUSSIAN, description="Observation error family")

    # Gamma(shape, rate) hyperpriors
    a_tau: float = Field(0.001, gt=0, description="Shape of the error precision prior")
    b_tau: float = Field(0.001, gt=0, description="Rate of the error precision prior")
    a_delta: float = Field(0.001, gt=0, description="Shape of the spline scale prior")
    b_delta: float = Field(0.001, gt=0, description="Rate of the spline scale prior")
    a_eta: float = Field(0.001, gt=0, description="Shape of the log-smoothing scale prior")
    b_eta: float = Field(0.001, gt=0, description="Rate of the log-smoothing scale prior")

    kappa: Optional[float] = Field(None, gt=0, description="Range parameter of the nu prior; default 2 / (t_n - t_1)")
    knot_policy: KnotPolicy = Field(KnotPolicy.AT_DATA, description="Knots at the data or on a regular grid")
    knot_count: Optional[int] = Field(None, ge=4, description="Number of regular knots")
    subknots: Optional[int] = Field(None, ge=2, description="Size m of the nu basis; default depends on variant")

    iterations: int = Field(10000, gt=0, description="Total MCMC sweeps")
    burnin: int = Field(2000, ge=0, description="Discarded leading sweeps")
    thinning: int = Field(1, gt=0, description="Keep every k-th sweep after burn-in")
    seed: int = Field(0, ge=0, description="Master seed of the chain's random stream")

    mode_tolerance: float = Field(1e-6, gt=0, description="Max-abs change that ends the gamma mode search")
    mode_max_iter: int = Field(50, gt=0, description="Iteration cap of the gamma mode search")

    @model_validator(mode="after")
    def _check_schedule(self):
        if self.burnin >= self.iterations:
            raise ValueError("burnin must be smaller than iterations")
        if self.knot_policy == KnotPolicy.REGULAR and self.knot_count is None:
            raise ValueError("regular knots need knot_count")
        return self

    @property
    def retained(self) -> int:
        return (self.iterations - self.burnin) // self.thinning

    def default_subknots(self, n: int) -> int:
        if self.subknots is not None:
            return self.subknots
        if self.variant == ModelVariant.ADAPTIVE_SDE2:
            return min(10, n)
        return n


class Observations(BaseModel):
    """Observed (t, y) pairs; repeated t values are allowed"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: np.ndarray = Field(..., description="Covariate values")
    y: np.ndarray = Field(..., description="Responses")

    @field_validator("t", "y", mode="before")
    @classmethod
    def _as_array(cls, value):
        return frozen_array(value).ravel()

    @model_validator(mode="after")
    def _check_pairs(self):
        if self.t.shape != self.y.shape:
            raise ValueError("t and y must have the same length")
        if not (np.all(np.isfinite(self.t)) and np.all(np.isfinite(self.y))):
            raise ValueError("observations must be finite")
        return self

    @property
    def n_obs(self) -> int:
        return int(self.t.size)


class ModelDesign(BaseModel):
    """Everything about a fit that does not change across sweeps"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid = Field(..., description="Spline mesh")
    psi: InterpolationMatrix = Field(..., description="Observations -> knots basis matrix")
    subgrid: Grid = Field(..., description="Mesh of the nu basis")
    omega: InterpolationMatrix = Field(..., description="Knots -> subknots basis matrix")
    R: BandedSymmetricMatrix = Field(..., description="Precision of the gamma prior")
    q_global: BandedSymmetricMatrix = Field(..., description="H' B-tilde^-1 H on the spline mesh")
    btilde: np.ndarray = Field(..., description="Diagonal of B-tilde on the spline mesh")
    kappa: float = Field(..., gt=0, description="Range parameter used for R")
    log_pdet_base: float = Field(0.0, description="log |H' B-tilde^-1 H|_+, used by SDE-II")

    @property
    def n_knots(self) -> int:
        return self.grid.size

    @property
    def n_subknots(self) -> int:
        return self.subgrid.size


class ChainState(BaseModel):
    """Current values of every sampled quantity"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    w: np.ndarray = Field(..., description="Spline weights at the knots")
    gamma: np.ndarray = Field(..., description="Weights of the nu basis")
    nu: np.ndarray = Field(..., description="Cached nu = Omega gamma at the knots")
    tau: float = Field(..., gt=0, description="Error precision")
    delta: float = Field(..., gt=0, description="Spline scale")
    eta: float = Field(..., gt=0, description="Scale of the gamma prior")
    rho: np.ndarray = Field(..., description="Per-observation mixing weights (all 1 under Gaussian errors)")


class SecondDiffs(BaseModel):
    """w-tilde = H w and the B-tilde weighted squares s_i = w-tilde_i^2 / B-tilde_ii"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    wtilde: np.ndarray
    s: np.ndarray


class ModeResult(BaseModel):
    """Outcome of the Newton-Raphson search for the gamma proposal mode"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    gamma: np.ndarray
    converged: bool
    iterations: int


class Draws(BaseModel):
    """Retained post-burn-in samples"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    variant: ModelVariant
    w: np.ndarray = Field(..., description="Spline weights, shape (samples, n)")
    gamma: np.ndarray = Field(..., description="Basis weights of nu, shape (samples, m)")
    tau: np.ndarray
    delta: np.ndarray
    eta: np.ndarray
    gamma_accepted: int = Field(0, description="Accepted gamma proposals")
    gamma_attempted: int = Field(0, description="Constructed gamma proposals")
    mode_failures: int = Field(0, description="Sweeps whose gamma proposal could not be built")

    @property
    def n_samples(self) -> int:
        return int(self.w.shape[0])

    @property
    def acceptance_rate(self) -> Optional[float]:
        if self.gamma_attempted == 0:
            return None
        return self.gamma_accepted / self.gamma_attempted


class Interval(BaseModel):
    """Posterior mean with a central 95% credible interval"""
    mean: float
    lo95: float
    hi95: float


class FitSummary(BaseModel):
    """Pointwise posterior summaries of f and lambda plus hyperparameter summaries"""
    t: List[float] = Field(..., description="Evaluation points")
    mean: List[float] = Field(..., description="Posterior mean of f")
    lo95: List[float] = Field(..., description="2.5% posterior quantile of f")
    hi95: List[float] = Field(..., description="97.5% posterior quantile of f")
    lambda_mean: List[float] = Field(..., description="Posterior mean of exp(nu)")
    tau: Interval
    delta: Interval
    eta: Optional[Interval] = Field(None, description="Absent for the global model")
    smoothing_ratio: Interval = Field(..., description="Posterior of delta / tau")
    acceptance_gamma: Optional[float] = Field(None, description="Gamma-step acceptance rate")
    samples: int
