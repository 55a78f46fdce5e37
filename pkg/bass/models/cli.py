"""
Validated option sets of the command-line subcommands
"""
from enum import Enum
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from bass.models.benchmark import Method
from bass.models.chain import ErrorFamily, KnotPolicy, ModelSpec, ModelVariant


class Subcommand(str, Enum):
    FIT = "fit"
    SIMULATE = "simulate"
    MATRICES = "matrices"


class ModelChoice(str, Enum):
    """Values of `fit --model`"""
    OSS = "oss"
    BASS1 = "bass1"
    BASS2 = "bass2"

    @property
    def variant(self) -> ModelVariant:
        return {
            ModelChoice.OSS: ModelVariant.GLOBAL,
            ModelChoice.BASS1: ModelVariant.ADAPTIVE_SDE1,
            ModelChoice.BASS2: ModelVariant.ADAPTIVE_SDE2,
        }[self]


class MatrixKind(str, Enum):
    """Values of `matrices --which`"""
    H = "h"
    B = "b"
    BTILDE = "btilde"
    Q = "q"
    Q1 = "q1"
    Q2 = "q2"
    R = "r"

    @property
    def needs_lambda(self) -> bool:
        return self in (MatrixKind.Q1, MatrixKind.Q2)


class CliConfig(BaseModel):
    """Front-end settings of one invocation, shared by every subcommand"""
    model_config = ConfigDict(extra="forbid")

    subcommand: Subcommand
    config_path: Optional[Path] = Field(None, description="YAML or JSON file with option values")
    log_level: Literal["ERROR", "WARNING", "INFO"] = Field("WARNING", description="Root logger level")

    @classmethod
    def from_flags(cls, command: str, config: Optional[Path] = None, verbose: bool = False,
                   quiet: bool = False) -> "CliConfig":
        """--quiet wins over --verbose"""
        level = "ERROR" if quiet else "INFO" if verbose else "WARNING"
        return cls(subcommand=command, config_path=config, log_level=level)


def _split_list(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (int, float)):
        return [value]
    return value


class FitOptions(BaseModel):
    """Options of `fit`; flags override config values which override these defaults"""
    model_config = ConfigDict(extra="forbid")

    input: Path = Field(..., description="CSV file with header t,y")
    output: Path = Field(..., description="Directory receiving summary.json and curve.csv")
    model: ModelChoice = Field(ModelChoice.BASS1, description="oss, bass1 or bass2")
    errors: ErrorFamily = Field(ErrorFamily.GAUSSIAN, description="gaussian or cauchy")
    seed: int = Field(0, ge=0)
    iterations: int = Field(10000, gt=0)
    burnin: int = Field(2000, ge=0)
    thin: int = Field(1, gt=0)
    knots: Union[Literal["auto"], int] = Field("auto", description="auto (distinct t) or the size of a regular grid")
    subknots: Optional[int] = Field(None, ge=2, description="Size of the nu basis")
    kappa: Optional[float] = Field(None, gt=0, description="Range parameter of the nu prior")
    eval_points: Optional[int] = Field(None, ge=2, description="Summarize on a regular grid of this size")

    @field_validator("knots", mode="before")
    @classmethod
    def _parse_knots(cls, value):
        if isinstance(value, str) and value.strip().lower() != "auto":
            try:
                return int(value)
            except ValueError:
                raise ValueError("knots must be 'auto' or an integer")
        if isinstance(value, str):
            return "auto"
        return value

    @model_validator(mode="after")
    def _check_schedule(self):
        if isinstance(self.knots, int) and self.knots < 4:
            raise ValueError("a regular knot grid needs at least 4 knots")
        if self.iterations - self.burnin < 100 * self.thin:
            raise ValueError("iterations - burnin must leave at least 100 retained draws")
        return self

    def to_model_spec(self) -> ModelSpec:
        regular = isinstance(self.knots, int)
        return ModelSpec(
            variant=self.model.variant,
            error_family=self.errors,
            kappa=self.kappa,
            knot_policy=KnotPolicy.REGULAR if regular else KnotPolicy.AT_DATA,
            knot_count=self.knots if regular else None,
            subknots=self.subknots,
            iterations=self.iterations,
            burnin=self.burnin,
            thinning=self.thin,
            seed=self.seed,
        )


class SimulateOptions(BaseModel):
    """Options of `simulate`"""
    model_config = ConfigDict(extra="forbid")

    example: List[int] = Field(..., min_length=1, description="Example ids, 1 to 3")
    output: Path = Field(..., description="Directory receiving benchmark.csv and benchmark.json")
    reps: int = Field(50, ge=2)
    seed: int = Field(0, ge=0)
    methods: List[Method] = Field(default_factory=lambda: list(Method), min_length=1)
    iterations: int = Field(5000, gt=0)
    burnin: int = Field(1000, ge=0)
    jobs: Optional[int] = Field(None, ge=1, description="Worker processes; default is every CPU")
    timings: bool = Field(False, description="Record wall_seconds per (example, method)")

    @field_validator("example", mode="before")
    @classmethod
    def _parse_examples(cls, value):
        return _split_list(value)

    @field_validator("example")
    @classmethod
    def _check_examples(cls, value):
        for example_id in value:
            if example_id not in (1, 2, 3):
                raise ValueError(f"unknown example {example_id}; choose 1, 2 or 3")
        return sorted(set(value))

    @field_validator("methods", mode="before")
    @classmethod
    def _parse_methods(cls, value):
        items = _split_list(value)
        return [Method.from_alias(item) if isinstance(item, str) else item for item in items]

    @field_validator("methods")
    @classmethod
    def _order_methods(cls, value):
        return [method for method in Method if method in value]

    @model_validator(mode="after")
    def _check_schedule(self):
        if self.iterations - self.burnin < 100:
            raise ValueError("iterations - burnin must leave at least 100 retained draws")
        return self


class MatricesOptions(BaseModel):
    """Options of `matrices`"""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    which: MatrixKind
    grid: Path = Field(..., description="File with one knot location per line")
    lambda_path: Optional[Path] = Field(None, alias="lambda", description="File with one lambda per knot")
    kappa: Optional[float] = Field(None, ge=0, description="Range parameter of R; default 2 / (t_n - t_1)")
    output: Optional[Path] = Field(None, description="Destination CSV; standard output when omitted")

    @model_validator(mode="after")
    def _check_lambda(self):
        if self.which.needs_lambda and self.lambda_path is None:
            raise ValueError(f"--which {self.which.value} needs --lambda")
        return self
