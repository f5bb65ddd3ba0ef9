"""Extrapolated BCD: candidate generation and the accept/restart schedule."""

from __future__ import annotations

import logging

from rmd.core.errors import AlreadyConvergedError, InvalidInputError
from rmd.core.matrices import ModelShape, ObservedMatrix, model_matrix
from rmd.solvers.bcd import refit_factors
from rmd.solvers.config import SolverConfig
from rmd.solvers.state import SolverState

logger = logging.getLogger("rmd.solvers.ebcd")


def ebcd_candidate(
    X: ObservedMatrix,
    shape: ModelShape,
    state: SolverState,
    alpha: float,
    rank_tol: float | None = None,
) -> tuple[SolverState, float]:
    """Refit against Z_alpha = alpha Z + (1 - alpha) M and return (candidate, delta).

    delta is the ratio of the candidate residual norm to the current one. The
    candidate keeps the current alpha, mu and iteration counter; accepting it is
    ebcd_accept's job.
    """
    if alpha < 1:
        raise InvalidInputError(f"Extrapolation parameter must be >= 1, got {alpha}.")
    if state.S_norm == 0:
        raise AlreadyConvergedError()
    M = model_matrix(state.factors, shape)
    Z_alpha = alpha * state.Z + (1.0 - alpha) * M
    factors, Z_next, s_norm = refit_factors(X, shape, Z_alpha, state.factors.H, rank_tol)
    candidate = state.advance(Z=Z_next, factors=factors, S_norm=s_norm, iter=state.iter)
    return candidate, s_norm / state.S_norm


def ebcd_accept(
    state: SolverState,
    candidate: SolverState,
    delta: float,
    config: SolverConfig,
) -> SolverState:
    if delta >= 1:
        logger.debug("Step %d rejected (delta=%.6g, alpha=%.4g)", state.iter + 1, delta, state.alpha)
        return state.advance(alpha=1.0)
    alpha, mu = state.alpha, state.mu
    if delta >= config.delta_bar:
        mu = max(mu, 0.25 * (alpha - 1.0))
        alpha = min(alpha + mu, config.alpha_bar)
        if alpha >= config.alpha_bar:
            alpha = 1.0
    return candidate.advance(iter=state.iter + 1, alpha=alpha, mu=mu)
