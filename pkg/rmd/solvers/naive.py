"""Alternating projection between the feasible latent set and rank-r matrices."""

from __future__ import annotations

from rmd.core.matrices import (
    FactorPair,
    FloatMatrix,
    ModelShape,
    ObservedMatrix,
    latent_update,
    model_matrix,
)
from rmd.solvers.linalg import best_rank_approximation, truncated_svd


def naive_step(
    X: ObservedMatrix,
    shape: ModelShape,
    Z: FloatMatrix,
    theta: FloatMatrix,
    r: int,
) -> tuple[FloatMatrix, FloatMatrix]:
    """Z <- projection of the model matrix of theta; theta <- TSVD_r of the shifted Z."""
    del Z  # the latent block is fully determined by theta
    Z_next = latent_update(X, shape.sign * theta + shape.offset)
    return Z_next, best_rank_approximation(shape.target(Z_next), r)


def naive_factor_step(
    X: ObservedMatrix,
    shape: ModelShape,
    factors: FactorPair,
    r: int,
) -> tuple[FloatMatrix, FactorPair]:
    """naive_step on factored theta, returning W = U_r diag(s_r) and H = V_r^T."""
    Z = latent_update(X, model_matrix(factors, shape))
    U, s, Vt = truncated_svd(shape.target(Z), r)
    return Z, FactorPair(W=U * s, H=Vt)
