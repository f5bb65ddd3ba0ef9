"""Iterate, trace and report types shared by the solvers."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from rmd.core.matrices import FactorPair, FloatMatrix
from rmd.theory.kkt import KktResidual


class StopReason(str, Enum):
    """Why a solve loop ended."""

    TOL = "tol"
    MAXIT = "maxit"
    TIME = "time"


@dataclass(frozen=True, eq=False)
class SolverState:
    """Current iterate (Z, W, H) plus the extrapolation state."""

    Z: FloatMatrix
    factors: FactorPair
    alpha: float = 1.0
    mu: float = 0.3
    iter: int = 0
    S_norm: float = 0.0

    def advance(self, **changes: object) -> SolverState:
        changes.setdefault("iter", self.iter + 1)
        return replace(self, **changes)


@dataclass(frozen=True)
class TraceRecord:
    """One row of the per-iteration trace."""

    k: int
    gamma: float
    alpha: float
    delta: float | None
    accepted: bool
    elapsed_s: float


@dataclass
class InvariantAudit:
    """Counts of invariant violations observed during a solve."""

    checked: bool = False
    feasibility: int = 0
    monotonicity: int = 0
    latent_bound: int = 0
    orthonormality: int = 0
    h_rank: int = 0

    @property
    def total(self) -> int:
        return self.feasibility + self.monotonicity + self.latent_bound + self.orthonormality + self.h_rank

    def as_dict(self) -> dict[str, int | bool]:
        return {
            "checked": self.checked,
            "feasibility": self.feasibility,
            "monotonicity": self.monotonicity,
            "latent_bound": self.latent_bound,
            "orthonormality": self.orthonormality,
            "h_rank": self.h_rank,
        }


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Trace of a solve plus its final diagnostics."""

    method: str
    trace: list[TraceRecord]
    factors: FactorPair
    Z: FloatMatrix
    gamma: float
    ls_rmd_error: float
    kkt: KktResidual
    stop_reason: StopReason
    elapsed_s: float
    audit: InvariantAudit = field(default_factory=InvariantAudit)

    @property
    def iterations(self) -> int:
        return self.trace[-1].k if self.trace else 0

    @property
    def accepted_steps(self) -> int:
        return sum(1 for record in self.trace[1:] if record.accepted)

    @property
    def rejected_steps(self) -> int:
        return sum(1 for record in self.trace[1:] if not record.accepted)

    @property
    def avg_iter_time(self) -> float:
        return self.elapsed_s / self.iterations if self.iterations else 0.0

    def accepted_gammas(self) -> list[float]:
        return [record.gamma for record in self.trace if record.accepted]

    def gamma_is_monotone(self, slack: float = 1e-12) -> bool:
        gammas = np.asarray(self.accepted_gammas())
        return bool(np.all(np.diff(gammas) <= slack))
