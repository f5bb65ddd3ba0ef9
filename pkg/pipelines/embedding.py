"""Threshold similarity matrices, embedding recovery and angular deviation."""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg

from pipelines.generators import PointCloud
from rmd.core.errors import DegenerateInputError, DimensionMismatchError, InvalidInputError
from rmd.core.matrices import FloatMatrix, ObservedMatrix, support_from

logger = logging.getLogger("pipelines.embedding")


def _check_tau(tau: float) -> None:
    if not 0 < tau < 1:
        raise InvalidInputError(f"tau must lie in (0, 1), got {tau}.")


def tsm_similarity(points: PointCloud, tau: float) -> ObservedMatrix:
    """X_ij = max(0, <z_i, z_j> - tau ||z_i|| ||z_j||), with X_ii = (1 - tau) ||z_i||^2.

    Zero-norm points keep an all-zero row and column.
    """
    _check_tau(tau)
    Z = points.points
    sq_norms = np.einsum("ij,ij->i", Z, Z)
    norms = np.sqrt(sq_norms)
    X = np.maximum(0.0, Z @ Z.T - tau * np.outer(norms, norms))
    X = 0.5 * (X + X.T)
    np.fill_diagonal(X, (1.0 - tau) * sq_norms)
    return support_from(X)


def gram_from_threshold(theta: FloatMatrix, tau: float) -> FloatMatrix:
    """Undo the tau shift of a similarity approximation: Theta + tau/(1-tau) s s^T."""
    _check_tau(tau)
    theta = np.asarray(theta, dtype=np.float64)
    s = np.sqrt(np.maximum(np.diag(theta), 0.0))
    return theta + (tau / (1.0 - tau)) * np.outer(s, s)


def embed_from_theta(theta: FloatMatrix, r: int) -> PointCloud:
    """Points whose Gram matrix is the best PSD rank-r fit of sym(Theta).

    Only positive eigenvalues are kept, so the result may live in fewer
    than r dimensions.
    """
    theta = np.asarray(theta, dtype=np.float64)
    n = theta.shape[0]
    if theta.ndim != 2 or theta.shape[1] != n:
        raise DimensionMismatchError(f"Embedding needs a square matrix, got {theta.shape}.")
    if not 1 <= r <= n:
        raise InvalidInputError(f"Embedding rank must lie in [1, {n}], got {r}.")
    A = 0.5 * (theta + theta.T)
    eigvals, eigvecs = scipy.linalg.eigh(A)
    order = np.argsort(eigvals)[::-1][:r]
    eigvals, eigvecs = eigvals[order], eigvecs[:, order]
    scale = np.max(np.abs(eigvals)) if eigvals.size else 0.0
    keep = eigvals > np.finfo(np.float64).eps * n * scale
    if not np.any(keep):
        raise DegenerateInputError("Matrix has no positive eigenvalues to embed.")
    if int(np.count_nonzero(keep)) < r:
        logger.debug("Embedding kept %d of %d requested dimensions", int(np.count_nonzero(keep)), r)
    return PointCloud(points=eigvecs[:, keep] * np.sqrt(eigvals[keep]))


def _pair_angles(cloud: PointCloud) -> FloatMatrix:
    gram = cloud.gram()
    norms = np.sqrt(np.maximum(np.diag(gram), 0.0))
    denom = np.outer(norms, norms)
    with np.errstate(divide="ignore", invalid="ignore"):
        cosines = np.where(denom > 0, gram / denom, 0.0)
    angles = np.arccos(np.clip(cosines, -1.0, 1.0))
    np.fill_diagonal(angles, np.where(norms > 0, 0.0, np.pi / 2))
    return angles


def mad(original: PointCloud, embedded: PointCloud, tau: float) -> float:
    """Mean |angle(z_i, z_j) - angle(y_i, y_j)| over pairs with positive thresholded similarity.

    Pairs are ordered and include i = j. Zero-norm points count as orthogonal to
    every point.
    """
    _check_tau(tau)
    if len(original) != len(embedded):
        raise DimensionMismatchError(
            f"Point counts differ: {len(original)} original vs {len(embedded)} embedded."
        )
    gram = original.gram()
    norms = np.sqrt(np.maximum(np.diag(gram), 0.0))
    pairs = gram - tau * np.outer(norms, norms) > 0
    if not np.any(pairs):
        raise DegenerateInputError(f"No pair has positive thresholded similarity at tau={tau}.")
    deviation = np.abs(_pair_angles(original) - _pair_angles(embedded))
    return float(np.mean(deviation[pairs]))
