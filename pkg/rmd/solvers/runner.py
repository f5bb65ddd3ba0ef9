"""Solver loop: initialization, stopping rules, tracing and invariant audits."""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable

import numpy as np

from rmd.core.errors import DegenerateInputError, InvalidInputError
from rmd.core.matrices import (
    FactorPair,
    ModelShape,
    ObservedMatrix,
    is_feasible,
    latent_update,
    ls_rmd_error,
    model_matrix,
    relative_ls_rmd_error,
)
from rmd.observability.metrics import metrics
from rmd.solvers.bcd import bcd_step
from rmd.solvers.config import InitStrategy, Method, SolverConfig
from rmd.solvers.ebcd import ebcd_accept, ebcd_candidate
from rmd.solvers.linalg import numerical_rank, truncated_svd
from rmd.solvers.naive import naive_factor_step
from rmd.solvers.state import InvariantAudit, SolveReport, SolverState, StopReason, TraceRecord
from rmd.theory.kkt import kkt_residual

logger = logging.getLogger("rmd.solvers.runner")

MONOTONE_SLACK = 1e-12
ORTHONORMAL_TOL = 1e-10

Clock = Callable[[], float]


def init_factors(
    X: ObservedMatrix,
    r: int,
    seed: int,
    *,
    shape: ModelShape | None = None,
    init: InitStrategy = InitStrategy.RANDOM,
) -> FactorPair:
    """Starting factors for every solver.

    ``random`` draws Gaussian W and H from PCG64 and rescales both to Frobenius
    norm sqrt(||X||_F). ``tsvd`` starts from the truncated SVD of the shifted
    data, so the first latent point is no farther from the model than X is.
    """
    if r < 1:
        raise InvalidInputError(f"Rank must be >= 1, got {r}.")
    norm_x = X.fro_norm
    if norm_x == 0:
        raise DegenerateInputError("Cannot initialise factors for a zero matrix.")
    m, n = X.dims
    if InitStrategy(init) is InitStrategy.TSVD:
        shape = shape or ModelShape.plain()
        U, s, Vt = truncated_svd(shape.target(X.values), r)
        return FactorPair(W=U * s, H=Vt)
    rng = np.random.default_rng(seed)
    W = rng.standard_normal((m, r))
    H = rng.standard_normal((r, n))
    scale = math.sqrt(norm_x)
    return FactorPair(W=W * (scale / np.linalg.norm(W, "fro")), H=H * (scale / np.linalg.norm(H, "fro")))


def _stop_reason(gamma: float, k: int, elapsed: float, config: SolverConfig) -> StopReason | None:
    if gamma <= config.tol:
        return StopReason.TOL
    if k >= config.maxit:
        return StopReason.MAXIT
    if config.time_limit is not None and elapsed >= config.time_limit:
        return StopReason.TIME
    return None


class _Auditor:
    def __init__(self, X: ObservedMatrix, shape: ModelShape, method: Method, enabled: bool) -> None:
        self.X = X
        self.shape = shape
        self.method = method
        self.audit = InvariantAudit(checked=enabled)

    def observe(self, state: SolverState, previous_gamma: float, gamma: float, accepted: bool) -> None:
        if not self.audit.checked:
            return
        X = self.X
        M = model_matrix(state.factors, self.shape)
        if not is_feasible(X, state.Z):
            self.audit.feasibility += 1
        if gamma > previous_gamma + MONOTONE_SLACK:
            self.audit.monotonicity += 1
        gap = float(np.linalg.norm(state.Z - M, "fro")) ** 2
        if ls_rmd_error(X, M) ** 2 > 4.0 * gap + 1e-12:
            self.audit.latent_bound += 1
        if accepted and self.method is not Method.NAIVE:
            W = state.factors.W
            if np.linalg.norm(W.T @ W - np.eye(W.shape[1]), "fro") > ORTHONORMAL_TOL:
                self.audit.orthonormality += 1
            if self.method is Method.EBCD and numerical_rank(state.factors.H) != W.shape[1]:
                self.audit.h_rank += 1


def solve(
    X: ObservedMatrix,
    shape: ModelShape,
    config: SolverConfig,
    method: Method | str,
    *,
    initial: FactorPair | None = None,
    clock: Clock = time.perf_counter,
) -> SolveReport:
    """Run one solver from a seeded start until tol, maxit or the time limit.

    Every state kept by the loop satisfies Z = latent_update(X, M(W, H)), so the
    recorded gamma is ||Z - M||_F / ||X||_F for the accepted iterate.
    """
    method = Method(method)
    norm_x = X.fro_norm
    if norm_x == 0:
        raise DegenerateInputError("Cannot decompose a zero matrix.")
    if method is Method.NAIVE and config.rank > min(X.dims):
        raise InvalidInputError(f"Naive needs rank <= {min(X.dims)}, got {config.rank}.")
    started = clock()
    factors = initial or init_factors(X, config.rank, config.seed, shape=shape, init=config.init)
    M = model_matrix(factors, shape)
    Z = latent_update(X, M)
    state = SolverState(
        Z=Z, factors=factors, alpha=1.0, mu=config.mu0, iter=0,
        S_norm=float(np.linalg.norm(Z - M, "fro")),
    )
    gamma = state.S_norm / norm_x
    trace = [TraceRecord(k=0, gamma=gamma, alpha=1.0, delta=None, accepted=True, elapsed_s=clock() - started)]
    auditor = _Auditor(X, shape, method, config.check_invariants)
    logger.info(
        "Starting %s solve: dims=%s rank=%d shape=(%+d, %g) gamma0=%.3e",
        method.value, X.dims, config.rank, shape.sign, shape.offset, gamma,
    )

    while True:
        reason = _stop_reason(gamma, state.iter, clock() - started, config)
        if reason is not None:
            break
        alpha_used = state.alpha
        previous = state
        if method is Method.EBCD:
            candidate, delta = ebcd_candidate(X, shape, state, state.alpha, config.rank_tol)
            state = ebcd_accept(state, candidate, delta, config)
            accepted = delta < 1
        elif method is Method.BCD:
            state = bcd_step(X, shape, state, config.rank_tol)
            delta = state.S_norm / previous.S_norm
            accepted = True
        else:
            _, new_factors = naive_factor_step(X, shape, state.factors, config.rank)
            M = model_matrix(new_factors, shape)
            Z = latent_update(X, M)
            state = state.advance(Z=Z, factors=new_factors, S_norm=float(np.linalg.norm(Z - M, "fro")))
            delta = state.S_norm / previous.S_norm
            accepted = True
        previous_gamma, gamma = gamma, state.S_norm / norm_x
        trace.append(
            TraceRecord(
                k=state.iter, gamma=gamma, alpha=alpha_used, delta=delta,
                accepted=accepted, elapsed_s=clock() - started,
            )
        )
        auditor.observe(state, previous_gamma, gamma, accepted)
        logger.debug(
            "%s iter=%d gamma=%.6e alpha=%.4g delta=%.6g accepted=%s",
            method.value, state.iter, gamma, alpha_used, delta, accepted,
        )

    elapsed = clock() - started
    M = model_matrix(state.factors, shape)
    report = SolveReport(
        method=method.value,
        trace=trace,
        factors=state.factors,
        Z=state.Z,
        gamma=gamma,
        ls_rmd_error=relative_ls_rmd_error(X, M),
        kkt=kkt_residual(X, state.Z, state.factors.W, state.factors.H, shape),
        stop_reason=reason,
        elapsed_s=elapsed,
        audit=auditor.audit,
    )
    tags = {"method": method.value, "stop_reason": reason.value}
    metrics.timing("solver.duration", elapsed * 1000.0, tags=tags)
    metrics.gauge("solver.gamma", gamma, tags=tags)
    metrics.increment("solver.iterations", float(report.iterations), tags=tags)
    if method is Method.EBCD:
        metrics.increment("solver.rejected_steps", float(report.rejected_steps), tags=tags)
    if report.audit.total:
        metrics.increment("solver.invariant_violations", float(report.audit.total), tags=tags)
        logger.warning("%s solve finished with invariant violations: %s", method.value, report.audit.as_dict())
    logger.info(
        "Finished %s solve: reason=%s iterations=%d gamma=%.3e rel_error=%.3e elapsed=%.3fs",
        method.value, reason.value, report.iterations, gamma, report.ls_rmd_error, elapsed,
    )
    return report
