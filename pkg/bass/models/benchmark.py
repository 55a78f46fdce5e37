"""
Data models for the simulation benchmark
"""
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from bass.models.chain import ModelVariant


class Method(str, Enum):
    """Fitted model, named as in the benchmark table"""
    BASS_V1 = "BASS-v1"
    BASS_V2 = "BASS-v2"
    OSS = "OSS"

    @classmethod
    def from_alias(cls, value: str) -> "Method":
        """Accept table names or the short command-line aliases bass1, bass2, oss"""
        key = value.strip().lower()
        for method in cls:
            if key in (method.value.lower(), method.alias):
                return method
        raise ValueError(f"unknown method '{value}'")

    @property
    def alias(self) -> str:
        return _ALIASES[self]

    @property
    def variant(self) -> ModelVariant:
        return _VARIANTS[self]


_ALIASES: Dict[Method, str] = {
    Method.BASS_V1: "bass1",
    Method.BASS_V2: "bass2",
    Method.OSS: "oss",
}

_VARIANTS: Dict[Method, ModelVariant] = {
    Method.BASS_V1: ModelVariant.ADAPTIVE_SDE1,
    Method.BASS_V2: ModelVariant.ADAPTIVE_SDE2,
    Method.OSS: ModelVariant.GLOBAL,
}


# id -> (domain, grid size, noise sd, SDE-II subknots)
_EXAMPLE_DEFAULTS: Dict[int, Tuple[Tuple[float, float], int, float, int]] = {
    1: ((0.0, 1.0), 101, 0.9, 3),
    2: ((-2.0, 2.0), 101, 0.5, 5),
    3: ((0.0, 1.0), 201, 0.2, 10),
}


class ExampleSpec(BaseModel):
    """One simulation example: true curve, design grid and noise level"""
    model_config = ConfigDict(frozen=True)

    id: int = Field(..., ge=1, le=3, description="Example number")
    lower: float = Field(..., description="Left end of the domain")
    upper: float = Field(..., description="Right end of the domain")
    n_points: int = Field(..., ge=4, description="Size of the regular design grid, endpoints included")
    noise_sd: float = Field(..., ge=0, description="Standard deviation of the Gaussian noise")
    reps: int = Field(50, ge=2, description="Number of replications")
    seed: int = Field(0, ge=0, description="Master seed of the benchmark")
    subknots_v2: int = Field(..., ge=2, description="Size of the nu basis for BASS-v2")

    @model_validator(mode="after")
    def _check_domain(self):
        if self.lower >= self.upper:
            raise ValueError("domain must have lower < upper")
        return self

    @classmethod
    def for_id(cls, example_id: int, **overrides) -> "ExampleSpec":
        """Example with its published defaults, optionally overridden"""
        if example_id not in _EXAMPLE_DEFAULTS:
            raise ValueError(f"unknown example {example_id}; choose 1, 2 or 3")
        (lower, upper), n_points, noise_sd, subknots = _EXAMPLE_DEFAULTS[example_id]
        values = dict(id=example_id, lower=lower, upper=upper, n_points=n_points,
                      noise_sd=noise_sd, subknots_v2=subknots)
        values.update(overrides)
        return cls(**values)


class ReplicationTask(BaseModel):
    """One (example, method, replication) fit, shippable to a worker process"""
    model_config = ConfigDict(frozen=True)

    example: ExampleSpec
    method: Method
    rep: int = Field(..., ge=0)
    iterations: int = Field(..., gt=0)
    burnin: int = Field(..., ge=0)


class ReplicationOutcome(BaseModel):
    """MSE of one replication, or the reason it failed"""
    example_id: int
    method: Method
    rep: int
    mse: Optional[float] = None
    error: Optional[str] = None
    seconds: float = 0.0


class BenchmarkRow(BaseModel):
    """Median and quartiles of MSE for one (example, method) pair"""
    example: int
    method: Method
    reps: int = Field(..., description="Replications that finished")
    median_mse: Optional[float] = Field(None, description="Absent when every replication failed")
    q1_mse: Optional[float] = None
    q3_mse: Optional[float] = None
    failures: int = Field(0, ge=0)
    wall_seconds: Optional[float] = Field(None, description="Total fit time; recorded only on request")

    @model_validator(mode="after")
    def _check_quartiles(self):
        if self.median_mse is not None and not self.q1_mse <= self.median_mse <= self.q3_mse:
            raise ValueError("quartiles must satisfy q1 <= median <= q3")
        return self


class BenchmarkReport(BaseModel):
    """All rows of one benchmark run plus the settings that produced them"""
    seed: int
    iterations: int
    burnin: int
    rows: List[BenchmarkRow] = Field(default_factory=list)

    def row(self, example: int, method: Method) -> Optional[BenchmarkRow]:
        for row in self.rows:
            if row.example == example and row.method == method:
                return row
        return None
