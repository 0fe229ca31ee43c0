"""Dense complex-matrix kernels shared by the rest of the package.

Everything here is a thin, deterministic layer over LAPACK (via numpy and
scipy).  Matrices are plain ``numpy.ndarray`` objects of dtype complex128;
:func:`as_matrix` and :func:`as_vector` are the validating entry points.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

HERMITIAN_TOL = 1e-12
RANK_TOL = 1e-13


class DimensionError(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class DomainError(ValueError):
    """Operand lies outside the domain of the operation (e.g. not Hermitian)."""


class SingularSystemError(np.linalg.LinAlgError):
    """Raised when a system is rank deficient at the working tolerance."""

    def __init__(self, message, sigma_min=0.0, sigma_max=0.0):
        super().__init__(message)
        self.sigma_min = float(sigma_min)
        self.sigma_max = float(sigma_max)

    @property
    def ratio(self):
        return self.sigma_min / self.sigma_max if self.sigma_max > 0 else 0.0


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2-D complex128 array (no copy if already one)."""
    a = np.asarray(M, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return a


def as_vector(b) -> np.ndarray:
    a = np.asarray(b, dtype=np.complex128)
    if a.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("vector has non-finite entries")
    return a


def hermitian_eigenvalues(M) -> np.ndarray:
    """Eigenvalues of the Hermitian part ``(M + M*)/2``, in descending order.

    ``M`` must be square and Hermitian to within ``HERMITIAN_TOL``
    componentwise; the symmetrisation only removes round-off.
    """
    a = as_matrix(M)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix must be square, got {a.shape}")
    skew = np.abs(a - a.conj().T)
    if skew.size and skew.max() > HERMITIAN_TOL:
        raise DomainError(f"matrix is not Hermitian (max |M - M*| = {skew.max():.3e})")
    h = 0.5 * (a + a.conj().T)
    return np.linalg.eigvalsh(h)[::-1]


def gram(M) -> np.ndarray:
    """The Gram matrix ``M* M`` made exactly Hermitian."""
    a = as_matrix(M)
    g = a.conj().T @ a
    return 0.5 * (g + g.conj().T)


def operator_norm(M) -> float:
    """Spectral norm: square root of the largest eigenvalue of the smaller Gram."""
    a = as_matrix(M)
    if a.size == 0:
        return 0.0
    g = gram(a) if a.shape[0] >= a.shape[1] else gram(a.conj().T)
    lam = np.linalg.eigvalsh(g)[-1]
    return float(np.sqrt(max(lam, 0.0)))


def singular_values(M) -> np.ndarray:
    a = as_matrix(M)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def min_singular_value(M) -> float:
    """Smallest singular value.

    Uses a full SVD rather than the Gram spectrum: squaring the matrix would
    floor the result at about ``1e-8 * sigma_max``, and the finite-section
    experiments need inverse norms far beyond ``1e8``.
    """
    s = singular_values(M)
    return float(s[-1]) if s.size else 0.0


def least_squares_solve(M, b) -> np.ndarray:
    """Minimise ``||M x - b||_2`` for full-column-rank ``M``.

    Householder QR followed by a triangular solve.  The result coincides with
    the solution of the normal equations ``M* M x = M* b``.
    """
    a = as_matrix(M)
    rhs = as_vector(b)
    rows, cols = a.shape
    if rhs.shape[0] != rows:
        raise DimensionError(f"right-hand side has length {rhs.shape[0]}, expected {rows}")
    if rows < cols:
        raise SingularSystemError(
            f"underdetermined system ({rows} x {cols}) has no unique solution"
        )
    q, r = scipy.linalg.qr(a, mode="economic")
    # R carries the singular values of M; checking it avoids a second pass over M
    s = singular_values(r)
    smax = s[0] if s.size else 0.0
    if s.size == 0 or s[-1] <= RANK_TOL * smax:
        smin = s[-1] if s.size else 0.0
        raise SingularSystemError(
            f"rank-deficient system: sigma_min/sigma_max = {smin / smax if smax else 0.0:.3e}",
            sigma_min=smin,
            sigma_max=smax,
        )
    return scipy.linalg.solve_triangular(r, q.conj().T @ rhs)
