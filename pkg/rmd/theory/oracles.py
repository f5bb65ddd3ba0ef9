"""Reference computations used to cross-check the eBCD update.

All oracles work in the shifted space T = sign * (Z - offset), where the
model matrix is plain W H. Pseudoinverses share the solver's rank tolerance.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from rmd.core.errors import RankDeficientError
from rmd.core.matrices import FactorPair, FloatMatrix, ModelShape, ObservedMatrix, model_matrix
from rmd.solvers.linalg import numerical_rank, orthonormal_range_basis, pinv
from rmd.solvers.state import SolverState


class SigmaWhCheck(NamedTuple):
    lhs: float
    rhs: float
    gap: float
    decrease_form: float


def _require_full_row_rank(H: FloatMatrix, rank_tol: float | None) -> None:
    rank = numerical_rank(H, rank_tol)
    if rank != H.shape[0]:
        raise RankDeficientError(f"H has numerical rank {rank} but {H.shape[0]} rows.")


def _extrapolated_target(
    Z: FloatMatrix, factors: FactorPair, shape: ModelShape, alpha: float
) -> FloatMatrix:
    M = model_matrix(factors, shape)
    return shape.target(alpha * Z + (1.0 - alpha) * M)


def sigma_wh_check(
    X: ObservedMatrix,
    Z: FloatMatrix,
    W: FloatMatrix,
    H: FloatMatrix,
    alpha: float,
    *,
    shape: ModelShape | None = None,
    rank_tol: float | None = None,
) -> SigmaWhCheck:
    """Evaluate both sides of the product-change identity for one extrapolated step.

    lhs = ||W(a)H(a) - WH||^2 / a^2 and rhs = ||S P||^2 + ||E S (I - P)||^2,
    with P the projector onto the row space of H and E the projector onto
    range(T_a H^T). decrease_form = ||S||^2 - ||W(a)H(a) - T_a||^2 / a^2
    equals the same quantity.
    """
    del X  # identity holds for any latent point; X only fixes the dimensions upstream
    shape = shape or ModelShape.plain()
    _require_full_row_rank(H, rank_tol)
    factors = FactorPair(W=W, H=H)
    WH = factors.product()
    S = shape.target(Z) - WH
    T_alpha = _extrapolated_target(Z, factors, shape, alpha)
    Q = orthonormal_range_basis(T_alpha @ H.T, rank_tol)
    P = H.T @ scipy.linalg.solve(H @ H.T, H, assume_a="pos")
    ES_perp = Q @ (Q.T @ (S - S @ P))
    product = Q @ (Q.T @ T_alpha)
    lhs = float(np.linalg.norm(product - WH, "fro") ** 2) / alpha**2
    rhs = float(np.linalg.norm(S @ P, "fro") ** 2 + np.linalg.norm(ES_perp, "fro") ** 2)
    decrease = float(np.linalg.norm(S, "fro") ** 2) - float(
        np.linalg.norm(product - T_alpha, "fro") ** 2
    ) / alpha**2
    return SigmaWhCheck(lhs=lhs, rhs=rhs, gap=abs(lhs - rhs), decrease_form=decrease)


def ebcd_step_v1(
    X: ObservedMatrix,
    shape: ModelShape,
    state: SolverState,
    alpha: float,
    rank_tol: float | None = None,
) -> FactorPair:
    """Extrapolated refit through explicit pseudoinverses.

    W = T_a H^+ and H = W^+ T_a. Slower than the QR route and only used to
    confirm that both produce the same product.
    """
    del X
    T_alpha = _extrapolated_target(state.Z, state.factors, shape, alpha)
    W_hat = T_alpha @ pinv(state.factors.H, rank_tol)
    H_hat = pinv(W_hat, rank_tol) @ T_alpha
    return FactorPair(W=W_hat, H=H_hat)


def extrapolation_identity_check(
    state: SolverState,
    alpha: float,
    *,
    shape: ModelShape | None = None,
    rank_tol: float | None = None,
) -> float:
    """||T_a H^+ - (W_bcd + (a - 1)(W_bcd - W))||_F for full-rank H."""
    shape = shape or ModelShape.plain()
    W, H = state.factors.W, state.factors.H
    _require_full_row_rank(H, rank_tol)
    T_alpha = _extrapolated_target(state.Z, state.factors, shape, alpha)
    W_hat = T_alpha @ pinv(H, rank_tol)
    T = shape.target(state.Z)
    W_bcd = scipy.linalg.solve(H @ H.T, H @ T.T, assume_a="pos").T
    W_extrapolated = W_bcd + (alpha - 1.0) * (W_bcd - W)
    return float(np.linalg.norm(W_hat - W_extrapolated, "fro"))
