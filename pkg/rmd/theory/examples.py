"""Closed-form examples: the two-by-two family, exact identity factors and the latent-to-LS error bound."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from rmd.core.errors import InfeasibleLatentError, InvalidInputError
from rmd.core.matrices import FactorPair, FloatMatrix, ObservedMatrix, is_feasible, ls_rmd_error

EPS_UPPER = 1.0 / math.sqrt(2.0)


class LatentBound(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def _check_eps(eps: float) -> None:
    if not 0 < eps < EPS_UPPER:
        raise InvalidInputError(f"eps must lie in (0, 1/sqrt(2)), got {eps}.")


def ell(b: float, eps: float) -> float:
    """Optimal latent objective of the 2x2 example as a function of Z_12 = b < 0.

    Evaluated as 2 (1 - b eps)^2 / (A + sqrt(B)), the conjugate form of
    (A - sqrt(B)) / 2, which stays accurate for large |b|.
    """
    _check_eps(eps)
    if not b < 0 or not math.isfinite(b):
        raise InvalidInputError(f"b must be finite and negative, got {b}.")
    a_term = 2.0 + b * b + eps * eps
    b_term = (b * b - eps * eps) ** 2 + 4.0 * (b + eps) ** 2
    return 2.0 * (1.0 - b * eps) ** 2 / (a_term + math.sqrt(b_term))


def example_matrix(eps: float) -> FloatMatrix:
    """X = [[1, 0], [eps, 1]]."""
    _check_eps(eps)
    return np.array([[1.0, 0.0], [eps, 1.0]])


def example32_theta(v: float, eps: float) -> tuple[FloatMatrix, float]:
    """Rank-one Theta = [[1, -v], [-1/v, 1]] and its squared LS error against the example matrix."""
    if not v > 0:
        raise InvalidInputError(f"v must be positive, got {v}.")
    X = example_matrix(eps)
    theta = np.array([[1.0, -v], [-1.0 / v, 1.0]])
    diff = X - np.maximum(0.0, theta)
    return theta, float(np.sum(diff * diff))


def identity_factors(n: int) -> FactorPair:
    """Rank-3 factors with max(0, WH) = I_n.

    Row i of W is the circle point (cos t_i, sin t_i, 1), t_i = 2 pi i / n. Column j
    of H is the line (cos t_j, sin t_j, -c) / (1 - c) with c = (1 + cos(2 pi / n)) / 2,
    which puts point j at height 1 and every other point at or below -1.
    """
    if n < 2:
        raise InvalidInputError(f"Identity factors need n >= 2, got {n}.")
    t = 2.0 * np.pi * np.arange(n) / n
    c = 0.5 * (1.0 + math.cos(2.0 * math.pi / n))
    W = np.column_stack([np.cos(t), np.sin(t), np.ones(n)])
    H = np.vstack([np.cos(t), np.sin(t), np.full(n, -c)]) / (1.0 - c)
    return FactorPair(W=W, H=H)


def latent_bound_check(X: ObservedMatrix, Z: FloatMatrix, M: FloatMatrix) -> LatentBound:
    """lhs = ||X - max(0, M)||^2 against rhs = 4 ||Z - M||^2 for feasible Z."""
    if not is_feasible(X, Z):
        raise InfeasibleLatentError("Latent matrix does not satisfy max(0, Z) = X.")
    lhs = ls_rmd_error(X, M) ** 2
    rhs = 4.0 * float(np.linalg.norm(Z - M, "fro")) ** 2
    return LatentBound(lhs=lhs, rhs=rhs, holds=lhs <= rhs + 1e-12)
