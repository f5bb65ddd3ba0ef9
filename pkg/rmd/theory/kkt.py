"""First-order optimality measures for the masked three-block problem."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from rmd.core.matrices import FactorPair, FloatMatrix, ModelShape, ObservedMatrix, model_matrix


@dataclass(frozen=True)
class KktResidual:
    """Norms of the Lagrangian gradients and constraint violations.

    The multipliers are Lambda = P_Omega(M - Z) and Sigma = P_Omega^C(max(0, M)).
    """

    grad_W_norm: float
    grad_H_norm: float
    primal_eq: float
    primal_ineq: float
    comp_slack: float
    dual_feas: float
    stationarity_z: float

    def max_norm(self) -> float:
        return max(
            self.grad_W_norm,
            self.grad_H_norm,
            self.primal_eq,
            self.primal_ineq,
            self.comp_slack,
            self.stationarity_z,
        )

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def kkt_residual(
    X: ObservedMatrix,
    Z: FloatMatrix,
    W: FloatMatrix,
    H: FloatMatrix,
    shape: ModelShape | None = None,
) -> KktResidual:
    shape = shape or ModelShape.plain()
    M = model_matrix(FactorPair(W=W, H=H), shape)
    mask = X.mask
    G = Z - M
    outside_Z = np.where(mask, 0.0, Z)
    sigma = np.where(mask, 0.0, np.maximum(0.0, M))
    lam = np.where(mask, M - Z, 0.0)
    return KktResidual(
        grad_W_norm=float(np.linalg.norm(G @ H.T, "fro")),
        grad_H_norm=float(np.linalg.norm(W.T @ G, "fro")),
        primal_eq=float(np.linalg.norm(np.where(mask, Z - X.values, 0.0), "fro")),
        primal_ineq=float(np.linalg.norm(np.maximum(0.0, outside_Z), "fro")),
        comp_slack=float(abs(np.sum(sigma * outside_Z))),
        dual_feas=float(sigma[~mask].min()) if np.any(~mask) else 0.0,
        stationarity_z=float(np.linalg.norm(G + lam + sigma, "fro")),
    )
