"""Experiment metrics: EDMC recovery error, compression rank and time budgets."""

from __future__ import annotations

import logging
import math

import numpy as np

from rmd.core.errors import DegenerateInputError, InvalidInputError
from rmd.core.matrices import FloatMatrix, ModelShape, ObservedMatrix
from rmd.solvers.config import SolverConfig

logger = logging.getLogger("pipelines.evaluation")

REFERENCE_DIMS = (784, 10000)
REFERENCE_TIME_LIMIT = 300.0


def edmc_relative_error(M_recovered: FloatMatrix, shape: ModelShape, theta_true: FloatMatrix) -> float:
    """||WH - Theta_t||_F / ||Theta_t||_F, where WH = d ee^T - M for the EDMC model."""
    if shape.sign != -1:
        raise InvalidInputError("EDMC error needs the rank-one-modified model shape.")
    norm_true = float(np.linalg.norm(theta_true, "fro"))
    if norm_true == 0:
        raise DegenerateInputError("EDMC error is undefined for a zero ground truth.")
    recovered = shape.target(np.asarray(M_recovered, dtype=np.float64))
    return float(np.linalg.norm(recovered - theta_true, "fro")) / norm_true


def edmc_baseline(config: SolverConfig) -> tuple[ModelShape, SolverConfig]:
    """Plain RMD at rank r + 1, which can absorb the d ee^T term as one extra component.

    The baseline's model matrix M is scored like any EDMC run: pass it to
    ``edmc_relative_error`` with ``ModelShape.edmc(d)``.
    """
    return ModelShape.plain(), config.model_copy(update={"rank": config.rank + 1})


def compression_rank(X: ObservedMatrix, ratio: float) -> int:
    """Largest r with r (m + n) <= ratio * nnz(X), clamped to at least 1."""
    if not ratio > 0:
        raise InvalidInputError(f"Compression ratio must be positive, got {ratio}.")
    if X.nnz == 0:
        raise DegenerateInputError("Compression rank is undefined for a matrix with no nonzeros.")
    m, n = X.dims
    rank = int(math.floor(ratio * X.nnz / (m + n)))
    if rank < 1:
        logger.warning(
            "Compression rank %d for nnz=%d dims=%s ratio=%g; clamping to 1", rank, X.nnz, X.dims, ratio
        )
        return 1
    return rank


def scaled_time_limit(
    m: int,
    n: int,
    base: float = REFERENCE_TIME_LIMIT,
    reference: tuple[int, int] = REFERENCE_DIMS,
) -> float:
    """Time budget proportional to the matrix size relative to a reference shape."""
    return base * (m * n) / float(reference[0] * reference[1])
