"""Dense complex-matrix kernels used by the per-character spectral criteria.

All functions accept a single matrix or a stack ``(..., m, n)`` and work on the
trailing two axes. The linear algebra itself is LAPACK through numpy.
"""
from __future__ import annotations

import numpy as np

from .errors import ContractError, SingularMatrixError

#: relative rank threshold against ``lambda_max``; every criterion can override it
RANK_TOL = 1e-12
HERMITIAN_TOL = 1e-10


def _matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim < 2:
        raise ContractError(f"expected a matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractError("matrix has non-finite entries")
    return A


def _square(A) -> np.ndarray:
    A = _matrix(A)
    if A.shape[-1] != A.shape[-2]:
        raise ContractError(f"expected a square matrix, got shape {A.shape[-2:]}")
    return A


def gram(A) -> np.ndarray:
    """``A* A`` on the trailing axes."""
    A = _matrix(A)
    return np.conj(np.swapaxes(A, -1, -2)) @ A


def cogram(A) -> np.ndarray:
    """``A A*`` on the trailing axes."""
    A = _matrix(A)
    return A @ np.conj(np.swapaxes(A, -1, -2))


def hermitian_eigenvalues(H, vectors: bool = False, tol: float = HERMITIAN_TOL):
    """Ascending real eigenvalues of a Hermitian matrix (and eigenvectors on request).

    Raises :class:`ContractError` when ``max|H - H*| > tol``.
    """
    H = _square(H)
    dev = np.max(np.abs(H - np.conj(np.swapaxes(H, -1, -2))), initial=0.0)
    if dev > tol:
        raise ContractError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    H = 0.5 * (H + np.conj(np.swapaxes(H, -1, -2)))
    if vectors:
        return np.linalg.eigh(H)
    return np.linalg.eigvalsh(H)


def det(H):
    """Determinant by LU factorization."""
    return np.linalg.det(_square(H))


def spectral_norm(A):
    """Largest singular value."""
    A = _matrix(A)
    if A.shape[-1] == 0 or A.shape[-2] == 0:
        return np.zeros(A.shape[:-2])
    return np.linalg.norm(A, ord=2, axis=(-2, -1))


def pseudo_inverse(A, tol: float = RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse ``(A* A)^{-1} A*`` of a full-column-rank matrix.

    Raises :class:`SingularMatrixError` (carrying ``lambda_min``) whenever
    ``lambda_min(A* A) <= tol * lambda_max(A* A)`` for any matrix of the stack.
    """
    A = _matrix(A)
    G = gram(A)
    lam = np.linalg.eigvalsh(G)
    lo, hi = lam[..., 0], lam[..., -1]
    bad = ~(lo > tol * hi) | (A.shape[-2] < A.shape[-1])
    if np.any(bad):
        raise SingularMatrixError(
            f"matrix is not of full column rank (lambda_min={np.min(lo):.3e}, lambda_max={np.max(hi):.3e})",
            lambda_min=float(np.min(lo)),
        )
    # R^{-1} Q* from a thin QR equals (A* A)^{-1} A* without squaring the conditioning
    Q, R = np.linalg.qr(A)
    return np.linalg.solve(R, np.conj(np.swapaxes(Q, -1, -2)))


def inverse(A, tol: float = RANK_TOL) -> np.ndarray:
    """Inverse of a square matrix, with the same rank test as :func:`pseudo_inverse`."""
    A = _square(A)
    lam = np.linalg.eigvalsh(gram(A))
    if np.any(~(lam[..., 0] > tol * lam[..., -1])):
        raise SingularMatrixError("matrix is singular", lambda_min=float(np.min(lam[..., 0])))
    return np.linalg.inv(A)
