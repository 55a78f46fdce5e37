"""
Data models for the finite-element mesh and the matrices assembled on it
"""
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def frozen_array(value, dtype=float) -> np.ndarray:
    """Copy value into a read-only numpy array"""
    array = np.array(value, dtype=dtype)
    array.setflags(write=False)
    return array


class Grid(BaseModel):
    """Sorted knot locations t_1 < ... < t_n with their spacings h_j"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    knots: np.ndarray = Field(..., description="Strictly increasing knot locations")
    spacings: np.ndarray = Field(..., description="Spacings h_j = t_{j+1} - t_j")

    @field_validator("knots", "spacings", mode="before")
    @classmethod
    def _as_array(cls, value):
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_mesh(self):
        if self.knots.ndim != 1 or self.knots.size < 2:
            raise ValueError("a grid needs at least two knots")
        if self.spacings.shape != (self.knots.size - 1,):
            raise ValueError("spacings must have one entry fewer than knots")
        if not np.array_equal(self.spacings, np.diff(self.knots)):
            raise ValueError("spacings must equal consecutive knot differences")
        if np.any(self.spacings <= 0):
            raise ValueError("knots must be strictly increasing")
        return self

    @property
    def size(self) -> int:
        return int(self.knots.size)

    @property
    def span(self) -> float:
        return float(self.knots[-1] - self.knots[0])


class TriDiagMatrix(BaseModel):
    """Square tridiagonal matrix stored as its three diagonals"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sub: np.ndarray = Field(..., description="Sub-diagonal, sub[k] = M[k+1, k]")
    main: np.ndarray = Field(..., description="Main diagonal")
    sup: np.ndarray = Field(..., description="Super-diagonal, sup[k] = M[k, k+1]")

    @field_validator("sub", "main", "sup", mode="before")
    @classmethod
    def _as_array(cls, value):
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_shapes(self):
        n = self.main.size
        if self.sub.shape != (n - 1,) or self.sup.shape != (n - 1,):
            raise ValueError("off-diagonals must have length n - 1")
        return self

    @property
    def size(self) -> int:
        return int(self.main.size)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.main) + np.diag(self.sub, -1) + np.diag(self.sup, 1)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.main * x
        y[1:] += self.sub * x[:-1]
        y[:-1] += self.sup * x[1:]
        return y


class DiagonalMatrix(BaseModel):
    """Diagonal matrix with strictly positive entries (B-tilde, Lambda)"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    diagonal: np.ndarray = Field(..., description="Diagonal entries, all > 0")

    @field_validator("diagonal", mode="before")
    @classmethod
    def _as_array(cls, value):
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_positive(self):
        if self.diagonal.ndim != 1 or not np.all(self.diagonal > 0):
            raise ValueError("diagonal entries must be strictly positive")
        return self

    @property
    def size(self) -> int:
        return int(self.diagonal.size)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal)


class BandedSymmetricMatrix(BaseModel):
    """
    Symmetric matrix with half-bandwidth p <= 2 in lower band storage

    bands has shape (p + 1, n) with bands[k, j] = M[j + k, j]; the trailing
    k entries of band k are padding and always zero.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bands: np.ndarray = Field(..., description="Lower bands, shape (p + 1, n)")

    @field_validator("bands", mode="before")
    @classmethod
    def _as_array(cls, value):
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_bands(self):
        if self.bands.ndim != 2 or not 1 <= self.bands.shape[0] <= 3:
            raise ValueError("bands must have shape (p + 1, n) with p <= 2")
        for k in range(1, self.bands.shape[0]):
            if np.any(self.bands[k, self.size - k:] != 0):
                raise ValueError(f"padding of band {k} must be zero")
        return self

    @property
    def size(self) -> int:
        return int(self.bands.shape[1])

    @property
    def bandwidth(self) -> int:
        return int(self.bands.shape[0] - 1)

    @property
    def diagonal(self) -> np.ndarray:
        return self.bands[0]

    def padded(self, bandwidth: int = 2) -> np.ndarray:
        """Return a writable copy of the bands padded to the given half-bandwidth"""
        out = np.zeros((bandwidth + 1, self.size))
        out[:self.bands.shape[0]] = self.bands
        return out

    def to_dense(self) -> np.ndarray:
        n = self.size
        dense = np.diag(self.bands[0])
        for k in range(1, self.bands.shape[0]):
            off = np.diag(self.bands[k, :n - k], -k)
            dense = dense + off + off.T
        return dense

    def matvec(self, x: np.ndarray) -> np.ndarray:
        n = self.size
        y = self.bands[0] * x
        for k in range(1, self.bands.shape[0]):
            band = self.bands[k, :n - k]
            y[k:] += band * x[:n - k]
            y[:n - k] += band * x[k:]
        return y

    def scaled(self, factor: float) -> "BandedSymmetricMatrix":
        return BandedSymmetricMatrix(bands=self.bands * factor)

    def plus(self, other: "BandedSymmetricMatrix") -> "BandedSymmetricMatrix":
        if other.size != self.size:
            raise ValueError("dimension mismatch")
        width = max(self.bandwidth, other.bandwidth)
        return BandedSymmetricMatrix(bands=self.padded(width) + other.padded(width))


class InterpolationMatrix(BaseModel):
    """
    Piecewise-linear basis evaluated at a set of points

    Row r has weights[r, 0] at column columns[r, 0] and weights[r, 1] at
    column columns[r, 0] + 1.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    columns: np.ndarray = Field(..., description="Column pairs (j, j + 1) per row")
    weights: np.ndarray = Field(..., description="Nonnegative weights per row, summing to 1")
    n_cols: int = Field(..., ge=2, description="Number of knots (columns)")

    @field_validator("columns", mode="before")
    @classmethod
    def _as_index_array(cls, value):
        return frozen_array(value, dtype=np.intp)

    @field_validator("weights", mode="before")
    @classmethod
    def _as_array(cls, value):
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_rows(self):
        if self.columns.ndim != 2 or self.columns.shape[1] != 2:
            raise ValueError("columns must have shape (rows, 2)")
        if self.weights.shape != self.columns.shape:
            raise ValueError("weights must match columns")
        if np.any(self.columns[:, 1] != self.columns[:, 0] + 1):
            raise ValueError("each row must touch two adjacent columns")
        if np.any(self.columns[:, 0] < 0) or np.any(self.columns[:, 1] >= self.n_cols):
            raise ValueError("column index out of range")
        if np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")
        return self

    @property
    def n_rows(self) -> int:
        return int(self.columns.shape[0])

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols))
        rows = np.arange(self.n_rows)
        dense[rows, self.columns[:, 0]] += self.weights[:, 0]
        dense[rows, self.columns[:, 1]] += self.weights[:, 1]
        return dense

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the piecewise-linear field with knot values x at every row point"""
        return (self.weights * np.asarray(x)[self.columns]).sum(axis=-1)

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        left = np.bincount(self.columns[:, 0], self.weights[:, 0] * y, minlength=self.n_cols)
        right = np.bincount(self.columns[:, 1], self.weights[:, 1] * y, minlength=self.n_cols)
        return left + right

    def weighted_gram(self, row_weights: np.ndarray) -> BandedSymmetricMatrix:
        """Assemble M' diag(row_weights) M as a banded matrix"""
        n = self.n_cols
        w0, w1 = self.weights[:, 0], self.weights[:, 1]
        bands = np.zeros((3, n))
        bands[0] = (np.bincount(self.columns[:, 0], row_weights * w0 * w0, minlength=n)
                    + np.bincount(self.columns[:, 1], row_weights * w1 * w1, minlength=n))
        bands[1] = np.bincount(self.columns[:, 0], row_weights * w0 * w1, minlength=n)
        return BandedSymmetricMatrix(bands=bands)
