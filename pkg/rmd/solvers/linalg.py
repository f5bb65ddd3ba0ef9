"""Rank-revealing factorizations shared by the solvers and the oracles.

Numerical rank follows one rule everywhere: a pivot (or singular value) counts
when it exceeds ``rank_tol`` times the largest one. With no tolerance given the
cutoff is machine epsilon times max(m, n).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from rmd.core.errors import EmptyRangeError, InvalidInputError
from rmd.core.matrices import FloatMatrix


def default_rank_tol(shape: tuple[int, ...]) -> float:
    return float(np.finfo(np.float64).eps * max(shape))


def _resolve_tol(A: FloatMatrix, rank_tol: float | None) -> float:
    return default_rank_tol(A.shape) if rank_tol is None else float(rank_tol)


def orthonormal_range_basis(A: FloatMatrix, rank_tol: float | None = None) -> FloatMatrix:
    """Orthonormal basis of the numerical range of A via column-pivoted QR."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise InvalidInputError("Range basis needs a two-dimensional matrix.")
    if A.size == 0 or not np.any(A):
        raise EmptyRangeError()
    Q, R, _ = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0:
        raise EmptyRangeError()
    keep = int(np.count_nonzero(diag > _resolve_tol(A, rank_tol) * diag[0]))
    return np.ascontiguousarray(Q[:, : max(keep, 1)])


def numerical_rank(A: FloatMatrix, rank_tol: float | None = None) -> int:
    A = np.asarray(A, dtype=np.float64)
    if A.size == 0:
        return 0
    s = scipy.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > _resolve_tol(A, rank_tol) * s[0]))


def pinv(A: FloatMatrix, rank_tol: float | None = None) -> FloatMatrix:
    """SVD pseudoinverse using the same relative cutoff as the QR rank test."""
    A = np.asarray(A, dtype=np.float64)
    return scipy.linalg.pinv(A, atol=0.0, rtol=_resolve_tol(A, rank_tol))


def truncated_svd(A: FloatMatrix, r: int) -> tuple[FloatMatrix, FloatMatrix, FloatMatrix]:
    """Leading r singular triplets (U_r, s_r, Vt_r) of A."""
    A = np.asarray(A, dtype=np.float64)
    if r < 1 or r > min(A.shape):
        raise InvalidInputError(f"Rank {r} is outside [1, {min(A.shape)}] for shape {A.shape}.")
    U, s, Vt = scipy.linalg.svd(A, full_matrices=False)
    return U[:, :r], s[:r], Vt[:r, :]


def best_rank_approximation(A: FloatMatrix, r: int) -> FloatMatrix:
    U, s, Vt = truncated_svd(A, r)
    return (U * s) @ Vt
