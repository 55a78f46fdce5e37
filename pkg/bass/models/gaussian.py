"""
Data models for banded Cholesky factors and canonical-form Gaussians
"""
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from bass.models.grid import BandedSymmetricMatrix, frozen_array


class BandedCholesky(BaseModel):
    """Lower-triangular banded factor L with L L' = M"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    factor: np.ndarray = Field(..., description="Lower bands of L, shape (p + 1, n)")

    @field_validator("factor", mode="before")
    @classmethod
    def _as_array(cls, value):
        return frozen_array(value)

    @property
    def size(self) -> int:
        return int(self.factor.shape[1])

    @property
    def bandwidth(self) -> int:
        return int(self.factor.shape[0] - 1)

    def to_dense(self) -> np.ndarray:
        n = self.size
        dense = np.diag(self.factor[0])
        for k in range(1, self.factor.shape[0]):
            dense = dense + np.diag(self.factor[k, :n - k], -k)
        return dense


class CanonicalGaussian(BaseModel):
    """N(P^-1 b, P^-1) given by its precision P and canonical mean b"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    precision: BandedSymmetricMatrix = Field(..., description="Strictly positive definite precision P")
    b: np.ndarray = Field(..., description="Canonical mean vector")

    @field_validator("b", mode="before")
    @classmethod
    def _as_array(cls, value):
        return frozen_array(value)

    @property
    def size(self) -> int:
        return self.precision.size
