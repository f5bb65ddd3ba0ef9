"""Validated solver parameters."""

from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, Field, model_validator
from pydantic.config import ConfigDict


class Method(str, Enum):
    """Available RMD solvers."""

    BCD = "bcd"
    EBCD = "ebcd"
    NAIVE = "naive"


class InitStrategy(str, Enum):
    """How the initial factors are chosen."""

    RANDOM = "random"
    TSVD = "tsvd"


class SolverConfig(BaseModel):
    """Tolerances, budgets and extrapolation parameters for one solve."""

    rank: int = Field(..., ge=1)
    tol: float = Field(1e-9, ge=0)
    maxit: int = Field(1000, ge=0)
    time_limit: float | None = Field(None, gt=0)
    alpha_bar: float = 4.0
    mu0: float = Field(0.3, gt=0)
    delta_bar: float = Field(0.8, gt=0, lt=1)
    seed: int = 0
    rank_tol: float | None = Field(None, gt=0)
    init: InitStrategy = InitStrategy.RANDOM
    check_invariants: bool = False

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _check_extrapolation(self) -> SolverConfig:
        if not self.alpha_bar > 1 or math.isinf(self.alpha_bar):
            raise ValueError(f"alpha_bar must be finite and > 1, got {self.alpha_bar}")
        if math.isnan(self.tol):
            raise ValueError("tol must not be NaN")
        return self
