"""
Finite-element assembly of the Galerkin matrices H, B, B-tilde and the banded
precisions derived from them
"""
from typing import Sequence

import numpy as np

from bass.engines.gmrf_engine import GmrfEngine
from bass.errors import DegenerateGridError, DomainError, InputError
from bass.models.grid import (
    Grid,
    TriDiagMatrix,
    DiagonalMatrix,
    BandedSymmetricMatrix,
    InterpolationMatrix,
)


class FemAssembler:
    """Builds every matrix of the piecewise-linear Galerkin discretization"""

    # Spacings below this fraction of the domain make 1/h overflow-prone
    MIN_RELATIVE_SPACING = 1e-12

    @staticmethod
    def build_grid(locations: Sequence[float], min_knots: int = 4) -> Grid:
        """
        Sort and deduplicate locations into a knot grid

        Args:
            locations: Observation times or any knot candidates
            min_knots: Minimum number of distinct knots (4 for the spline mesh)

        Returns:
            Grid with sorted unique knots
        """
        try:
            values = np.asarray(locations, dtype=float).ravel()
        except (TypeError, ValueError) as exc:
            raise InputError(f"locations must be numeric: {exc}") from exc

        if not np.all(np.isfinite(values)):
            raise InputError("locations must be finite")

        knots = np.unique(values)
        if knots.size < min_knots:
            raise DegenerateGridError(
                f"need at least {min_knots} distinct locations, got {knots.size}")

        spacings = np.diff(knots)
        if spacings.min() < FemAssembler.MIN_RELATIVE_SPACING * (knots[-1] - knots[0]):
            raise DegenerateGridError("knot spacing too small relative to the domain")

        return Grid(knots=knots, spacings=spacings)

    @staticmethod
    def build_H(grid: Grid) -> TriDiagMatrix:
        """Second-derivative stiffness matrix; first and last rows are zero"""
        n = grid.size
        inv = 1.0 / grid.spacings

        sub = np.zeros(n - 1)
        main = np.zeros(n)
        sup = np.zeros(n - 1)
        sub[:n - 2] = inv[:-1]
        main[1:-1] = -(inv[:-1] + inv[1:])
        sup[1:] = inv[1:]
        return TriDiagMatrix(sub=sub, main=main, sup=sup)

    @staticmethod
    def build_B(grid: Grid) -> TriDiagMatrix:
        """Consistent mass matrix of the hat functions"""
        h = grid.spacings
        main = np.empty(grid.size)
        main[0] = h[0] / 3.0
        main[-1] = h[-1] / 3.0
        main[1:-1] = (h[:-1] + h[1:]) / 3.0
        return TriDiagMatrix(sub=h / 6.0, main=main, sup=h / 6.0)

    @staticmethod
    def btilde_diagonal(grid: Grid) -> np.ndarray:
        h = grid.spacings
        d = np.empty(grid.size)
        d[0] = h[0] / 2.0
        d[-1] = h[-1] / 2.0
        d[1:-1] = (h[:-1] + h[1:]) / 2.0
        return d

    @staticmethod
    def build_Btilde(grid: Grid) -> DiagonalMatrix:
        """Lumped mass matrix: row sums of B"""
        return DiagonalMatrix(diagonal=FemAssembler.btilde_diagonal(grid))

    @staticmethod
    def apply_H(grid: Grid, x: np.ndarray) -> np.ndarray:
        """Compute H x without forming H"""
        inv = 1.0 / grid.spacings
        out = np.zeros(grid.size)
        out[1:-1] = x[:-2] * inv[:-1] - x[1:-1] * (inv[:-1] + inv[1:]) + x[2:] * inv[1:]
        return out

    @staticmethod
    def _stencil(grid: Grid) -> np.ndarray:
        # Nonzero entries of interior row i of H, columns (i-1, i, i+1)
        inv = 1.0 / grid.spacings
        return np.column_stack([inv[:-1], -(inv[:-1] + inv[1:]), inv[1:]])

    @staticmethod
    def _assemble(coeffs: np.ndarray, weights: np.ndarray, n: int) -> BandedSymmetricMatrix:
        """
        Sum weights[r] * a_r a_r' over interior rows r

        a_r has coeffs[r] at columns (r, r+1, r+2) (interior row r+1 of H),
        so the result is H' diag(weights) H generalized to rescaled stencils.
        """
        bands = np.zeros((3, n))
        first = np.arange(n - 2)
        for p in range(3):
            for q in range(p + 1):
                bands[p - q, first + q] += weights * coeffs[:, p] * coeffs[:, q]
        return BandedSymmetricMatrix(bands=bands)

    @staticmethod
    def _check_lambda(grid: Grid, lam: Sequence[float]) -> np.ndarray:
        values = np.asarray(lam, dtype=float).ravel()
        if values.size != grid.size:
            raise InputError(f"lambda has {values.size} entries, grid has {grid.size} knots")
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise DomainError("lambda must be finite and strictly positive")
        return values

    @staticmethod
    def build_Q_global(grid: Grid) -> BandedSymmetricMatrix:
        """Q = H' B-tilde^-1 H, intrinsic of rank n - 2"""
        btilde = FemAssembler.btilde_diagonal(grid)
        return FemAssembler._assemble(FemAssembler._stencil(grid), 1.0 / btilde[1:-1], grid.size)

    @staticmethod
    def build_Q_sde1(grid: Grid, lam: Sequence[float]) -> BandedSymmetricMatrix:
        """Q = H' Lambda B-tilde^-1 Lambda H; lambda at the two end knots drops out"""
        values = FemAssembler._check_lambda(grid, lam)
        btilde = FemAssembler.btilde_diagonal(grid)
        weights = values[1:-1] ** 2 / btilde[1:-1]
        return FemAssembler._assemble(FemAssembler._stencil(grid), weights, grid.size)

    @staticmethod
    def build_Q_sde2(grid: Grid, lam: Sequence[float]) -> BandedSymmetricMatrix:
        """Q = Lambda H' B-tilde^-1 H Lambda; null space spanned by Lambda^-1 1 and Lambda^-1 t"""
        values = FemAssembler._check_lambda(grid, lam)
        btilde = FemAssembler.btilde_diagonal(grid)
        coeffs = FemAssembler._stencil(grid) * np.column_stack([values[:-2], values[1:-1], values[2:]])
        return FemAssembler._assemble(coeffs, 1.0 / btilde[1:-1], grid.size)

    @staticmethod
    def build_R(grid: Grid, kappa: float) -> BandedSymmetricMatrix:
        """
        Precision of the nu prior, R = kappa^4 B-tilde - kappa^2 (H' + H) + H' B-tilde^-1 H

        Equals (kappa^2 B-tilde - H)' B-tilde^-1 (kappa^2 B-tilde - H), so it is
        positive definite for kappa > 0 and reduces to the intrinsic Q at kappa = 0.
        """
        if not np.isfinite(kappa) or kappa < 0:
            raise DomainError(f"kappa must be nonnegative, got {kappa}")

        H = FemAssembler.build_H(grid)
        k2 = kappa * kappa
        bands = FemAssembler.build_Q_global(grid).padded(2)
        bands[0] += k2 * k2 * FemAssembler.btilde_diagonal(grid) - 2.0 * k2 * H.main
        bands[1, :-1] -= k2 * (H.sub + H.sup)
        return BandedSymmetricMatrix(bands=bands)

    @staticmethod
    def build_interpolation(eval_points: Sequence[float], grid: Grid) -> InterpolationMatrix:
        """
        Hat-function weights of each evaluation point

        Points outside [t_1, t_n] are clamped to the nearest boundary knot.
        """
        points = np.asarray(eval_points, dtype=float).ravel()
        if points.size == 0:
            raise InputError("evaluation set is empty")
        if not np.all(np.isfinite(points)):
            raise InputError("evaluation points must be finite")

        knots = grid.knots
        x = np.clip(points, knots[0], knots[-1])
        left = np.clip(np.searchsorted(knots, x, side="right") - 1, 0, grid.size - 2)
        u = np.clip((x - knots[left]) / grid.spacings[left], 0.0, 1.0)

        return InterpolationMatrix(
            columns=np.column_stack([left, left + 1]),
            weights=np.column_stack([1.0 - u, u]),
            n_cols=grid.size,
        )

    @staticmethod
    def log_pdet_Q_global(grid: Grid) -> float:
        """
        log of the product of nonzero eigenvalues of H' B-tilde^-1 H

        The nonzero spectrum equals that of D^1/2 H_I H_I' D^1/2, with H_I the
        interior rows of H and D = B-tilde^-1 on the interior knots. H_I H_I' is
        pentadiagonal, so its determinant comes from a banded Cholesky.
        """
        rows = FemAssembler._stencil(grid)
        bands = np.zeros((3, rows.shape[0]))
        bands[0] = np.sum(rows ** 2, axis=1)
        bands[1, :-1] = rows[:-1, 1] * rows[1:, 0] + rows[:-1, 2] * rows[1:, 1]
        bands[2, :-2] = rows[:-2, 2] * rows[2:, 0]
        gram = GmrfEngine.cholesky_banded(BandedSymmetricMatrix(bands=bands))
        btilde = FemAssembler.btilde_diagonal(grid)[1:-1]
        return float(GmrfEngine.logdet_banded(gram) - np.sum(np.log(btilde)))
