"""Block coordinate descent for the three-block latent model."""

from __future__ import annotations

import logging

import numpy as np

from rmd.core.matrices import (
    FactorPair,
    FloatMatrix,
    ModelShape,
    ObservedMatrix,
    latent_update,
    model_matrix,
)
from rmd.solvers.linalg import orthonormal_range_basis
from rmd.solvers.state import SolverState

logger = logging.getLogger("rmd.solvers.bcd")


def refit_factors(
    X: ObservedMatrix,
    shape: ModelShape,
    Z: FloatMatrix,
    H: FloatMatrix,
    rank_tol: float | None = None,
) -> tuple[FactorPair, FloatMatrix, float]:
    """Least-squares refit of (W, H) against Z, then the matching latent update.

    Returns the new factors, the latent matrix projected from their model
    matrix, and the norm of the resulting residual.
    """
    T = shape.target(Z)
    Q = orthonormal_range_basis(T @ H.T, rank_tol)
    if Q.shape[1] < H.shape[0]:
        logger.debug("Rank drop in refit: %d -> %d columns", H.shape[0], Q.shape[1])
    factors = FactorPair(W=Q, H=Q.T @ T)
    M = model_matrix(factors, shape)
    Z_next = latent_update(X, M)
    return factors, Z_next, float(np.linalg.norm(Z_next - M, "fro"))


def bcd_step(
    X: ObservedMatrix,
    shape: ModelShape,
    state: SolverState,
    rank_tol: float | None = None,
) -> SolverState:
    """One pass over Z, W and H.

    W is taken as an orthonormal basis of range(T H^T), which gives the same
    product WH as the two pseudoinverse solves. The returned state carries the
    latent update for the new factors, so its S_norm is the new residual.
    """
    Z = latent_update(X, model_matrix(state.factors, shape))
    factors, Z_next, s_norm = refit_factors(X, shape, Z, state.factors.H, rank_tol)
    return state.advance(Z=Z_next, factors=factors, S_norm=s_norm, alpha=1.0)
