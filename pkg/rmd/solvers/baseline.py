"""Truncated SVD baseline."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from rmd.core.matrices import FloatMatrix, ObservedMatrix, ls_rmd_error
from rmd.solvers.linalg import best_rank_approximation


class TsvdBaseline(NamedTuple):
    theta: FloatMatrix
    raw_error: float
    relu_error: float


def tsvd_baseline(X: ObservedMatrix, r: int) -> TsvdBaseline:
    """Best rank-r approximation of X with its plain and ReLU-clipped errors.

    relu_error <= raw_error always holds since clipping negatives only moves
    entries toward the nonnegative data.
    """
    theta = best_rank_approximation(X.values, r)
    raw = float(np.linalg.norm(X.values - theta, "fro"))
    return TsvdBaseline(theta=theta, raw_error=raw, relu_error=ls_rmd_error(X, theta))
