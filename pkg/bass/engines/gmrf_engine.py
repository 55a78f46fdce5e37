"""
Banded linear algebra for GMRFs: Cholesky, solves, log-determinants and exact
sampling from canonical-form Gaussians
"""
import re
from typing import Tuple

import numpy as np
import scipy.linalg

from bass.errors import FactorizationError, InputError
from bass.models.grid import BandedSymmetricMatrix
from bass.models.gaussian import BandedCholesky, CanonicalGaussian


_MINOR_PATTERN = re.compile(r"(\d+)-th leading minor")


class GmrfEngine:
    """Factorizes, solves and samples with banded symmetric precisions"""

    # A pivot at or below this fraction of the largest diagonal entry is non-PD
    PIVOT_TOLERANCE = 1e-12

    @staticmethod
    def cholesky_banded(m: BandedSymmetricMatrix) -> BandedCholesky:
        """
        Factor m = L L' keeping the half-bandwidth of m

        Args:
            m: Strictly positive definite banded matrix

        Returns:
            BandedCholesky holding the lower bands of L

        Raises:
            FactorizationError: with the 0-based pivot index when m is not PD
        """
        if not np.all(np.isfinite(m.bands)):
            raise FactorizationError("matrix has non-finite entries")

        try:
            factor = scipy.linalg.cholesky_banded(m.bands, lower=True, check_finite=False)
        except np.linalg.LinAlgError as exc:
            match = _MINOR_PATTERN.search(str(exc))
            pivot = int(match.group(1)) - 1 if match else None
            raise FactorizationError("matrix is not positive definite", pivot=pivot) from exc

        scale = np.max(np.abs(m.diagonal))
        small = np.flatnonzero(factor[0] ** 2 <= GmrfEngine.PIVOT_TOLERANCE * scale)
        if small.size:
            raise FactorizationError("matrix is numerically singular", pivot=int(small[0]))

        return BandedCholesky(factor=factor)

    @staticmethod
    def solve_banded(chol: BandedCholesky, rhs: np.ndarray) -> np.ndarray:
        """Solve m x = rhs by forward and back substitution with m = L L'"""
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape[0] != chol.size:
            raise InputError(f"right-hand side has length {rhs.shape[0]}, matrix has size {chol.size}")
        return scipy.linalg.cho_solve_banded((chol.factor, True), rhs, check_finite=False)

    @staticmethod
    def logdet_banded(chol: BandedCholesky) -> float:
        return float(2.0 * np.sum(np.log(chol.factor[0])))

    @staticmethod
    def _backsolve_transpose(chol: BandedCholesky, z: np.ndarray) -> np.ndarray:
        # Solve L' v = z; L' is upper banded, stored for solve_banded as ab[p - k, k:] = L[j + k, j]
        n, p = chol.size, chol.bandwidth
        upper = np.zeros((p + 1, n))
        for k in range(p + 1):
            upper[p - k, k:] = chol.factor[k, :n - k]
        return scipy.linalg.solve_banded((0, p), upper, z, check_finite=False)

    @staticmethod
    def factor_canonical(g: CanonicalGaussian) -> Tuple[BandedCholesky, np.ndarray]:
        """Return the Cholesky factor of the precision and the mean P^-1 b"""
        chol = GmrfEngine.cholesky_banded(g.precision)
        return chol, GmrfEngine.solve_banded(chol, g.b)

    @staticmethod
    def draw_from_factor(chol: BandedCholesky, mean: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        z = rng.standard_normal(chol.size)
        return mean + GmrfEngine._backsolve_transpose(chol, z)

    @staticmethod
    def sample_canonical(g: CanonicalGaussian, rng: np.random.Generator) -> np.ndarray:
        """
        Exact draw from N(P^-1 b, P^-1)

        Computes mu = P^-1 b, then x = mu + L'^-1 z with z standard normal;
        no covariance is ever formed.
        """
        chol, mean = GmrfEngine.factor_canonical(g)
        return GmrfEngine.draw_from_factor(chol, mean, rng)

    @staticmethod
    def canonical_log_kernel(g: CanonicalGaussian, x: np.ndarray) -> float:
        """log density of the canonical Gaussian at x up to an x-independent constant"""
        return float(-0.5 * GmrfEngine.quad_form(g.precision, x) + g.b @ x)

    @staticmethod
    def quad_form(m: BandedSymmetricMatrix, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (m.size,):
            raise InputError(f"vector has shape {x.shape}, matrix has size {m.size}")
        return float(x @ m.matvec(x))
