"""Dense matrix primitives for masked ReLU decompositions.

X is held densely next to a boolean mask of its strictly positive entries.
Every function here is pure: inputs are never mutated and no module state is
shared, so they may be called concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray

from rmd.core.errors import DegenerateInputError, DimensionMismatchError, InvalidInputError

FloatMatrix = NDArray[np.float64]
BoolMatrix = NDArray[np.bool_]


@dataclass(frozen=True, eq=False)
class ObservedMatrix:
    """Sparse nonnegative target X together with its positive support."""

    values: FloatMatrix
    mask: BoolMatrix = field(repr=False)

    @property
    def dims(self) -> tuple[int, int]:
        return self.values.shape  # type: ignore[return-value]

    @property
    def support(self) -> frozenset[tuple[int, int]]:
        """Index pairs of the support, 1-indexed."""
        rows, cols = np.nonzero(self.mask)
        return frozenset((int(i) + 1, int(j) + 1) for i, j in zip(rows, cols, strict=True))

    @cached_property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.mask))

    @cached_property
    def fro_norm(self) -> float:
        return float(np.linalg.norm(self.values, "fro"))

    @property
    def density(self) -> float:
        m, n = self.dims
        return self.nnz / float(m * n) if m * n else 0.0


@dataclass(frozen=True, eq=False)
class FactorPair:
    """Low-rank factors W (m x r) and H (r x n)."""

    W: FloatMatrix
    H: FloatMatrix

    def __post_init__(self) -> None:
        if self.W.ndim != 2 or self.H.ndim != 2:
            raise DimensionMismatchError("Factors must be two-dimensional.")
        if self.W.shape[1] != self.H.shape[0]:
            raise DimensionMismatchError(
                f"Inner dimensions disagree: W is {self.W.shape}, H is {self.H.shape}."
            )

    @property
    def rank(self) -> int:
        return int(self.W.shape[1])

    @property
    def dims(self) -> tuple[int, int]:
        return int(self.W.shape[0]), int(self.H.shape[1])

    def product(self) -> FloatMatrix:
        return self.W @ self.H


@dataclass(frozen=True)
class ModelShape:
    """Model matrix M = sign * W H + offset * ee^T."""

    sign: int = 1
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise InvalidInputError(f"Model sign must be +1 or -1, got {self.sign}.")
        if self.offset < 0 or not np.isfinite(self.offset):
            raise InvalidInputError(f"Model offset must be finite and >= 0, got {self.offset}.")
        if self.sign == 1 and self.offset != 0:
            raise InvalidInputError("The plain model carries no offset.")

    @classmethod
    def plain(cls) -> ModelShape:
        return cls(sign=1, offset=0.0)

    @classmethod
    def edmc(cls, d: float) -> ModelShape:
        if d <= 0:
            raise InvalidInputError(f"EDMC threshold must be positive, got {d}.")
        return cls(sign=-1, offset=float(d))

    @property
    def is_plain(self) -> bool:
        return self.sign == 1

    def target(self, Z: FloatMatrix) -> FloatMatrix:
        """Map a latent matrix to the space the factor product approximates."""
        if self.is_plain:
            return Z
        return self.sign * (Z - self.offset)


@dataclass(frozen=True, eq=False)
class ResidualMatrix:
    """S = P_Omega(X - M) - P_Omega^C(max(0, M))."""

    S: FloatMatrix

    @cached_property
    def norm(self) -> float:
        return float(np.linalg.norm(self.S, "fro"))


def support_from(values: ArrayLike) -> ObservedMatrix:
    """Build an ObservedMatrix; strict positivity defines the support."""
    array = np.array(values, dtype=np.float64, copy=True)
    if array.ndim != 2:
        raise InvalidInputError(f"Expected a two-dimensional matrix, got {array.ndim} dimensions.")
    if not np.all(np.isfinite(array)):
        raise InvalidInputError("Matrix contains non-finite entries.")
    if np.any(array < 0):
        raise InvalidInputError("Matrix contains negative entries.")
    array.setflags(write=False)
    mask = array > 0
    mask.setflags(write=False)
    return ObservedMatrix(values=array, mask=mask)


def project(A: FloatMatrix, mask: BoolMatrix | ObservedMatrix, complement: bool = False) -> FloatMatrix:
    """P_Omega(A), or P_Omega^C(A) when ``complement`` is set."""
    keep = mask.mask if isinstance(mask, ObservedMatrix) else np.asarray(mask, dtype=bool)
    _check_dims(A, keep.shape)
    if complement:
        keep = ~keep
    return np.where(keep, A, 0.0)


def model_matrix(factors: FactorPair, shape: ModelShape) -> FloatMatrix:
    M = factors.product()
    if not shape.is_plain:
        M = shape.sign * M + shape.offset
    return M


def latent_update(X: ObservedMatrix, M: FloatMatrix) -> FloatMatrix:
    """Projection of M onto {Z : max(0, Z) = X}."""
    _check_dims(M, X.dims)
    return np.where(X.mask, X.values, np.minimum(0.0, M))


def residual(X: ObservedMatrix, M: FloatMatrix) -> ResidualMatrix:
    _check_dims(M, X.dims)
    S = np.where(X.mask, X.values - M, -np.maximum(0.0, M))
    return ResidualMatrix(S=S)


def relative_residual(Z: FloatMatrix, M: FloatMatrix, X: ObservedMatrix) -> float:
    """Gamma = ||Z - M||_F / ||X||_F."""
    _check_dims(Z, X.dims)
    _check_dims(M, X.dims)
    norm_x = X.fro_norm
    if norm_x == 0:
        raise DegenerateInputError("Relative residual is undefined for a zero matrix.")
    return float(np.linalg.norm(Z - M, "fro")) / norm_x


def ls_rmd_error(X: ObservedMatrix, M: FloatMatrix) -> float:
    """||X - max(0, M)||_F."""
    _check_dims(M, X.dims)
    return float(np.linalg.norm(X.values - np.maximum(0.0, M), "fro"))


def relative_ls_rmd_error(X: ObservedMatrix, M: FloatMatrix) -> float:
    norm_x = X.fro_norm
    if norm_x == 0:
        raise DegenerateInputError("Relative error is undefined for a zero matrix.")
    return ls_rmd_error(X, M) / norm_x


def is_feasible(X: ObservedMatrix, Z: FloatMatrix) -> bool:
    """True when max(0, Z) equals X entrywise."""
    return bool(np.array_equal(np.maximum(0.0, Z), X.values))


def _check_dims(A: FloatMatrix, dims: tuple[int, ...]) -> None:
    if np.shape(A) != tuple(dims):
        raise DimensionMismatchError(f"Expected shape {tuple(dims)}, got {np.shape(A)}.")
