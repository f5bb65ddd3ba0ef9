"""Shared error classes for matrix primitives, solvers and file ingestion."""

from __future__ import annotations


class RmdError(RuntimeError):
    """Base exception raised by the toolkit."""

    def __init__(self, message: str, code: str = "E_RMD") -> None:
        super().__init__(message)
        self.code = code


class InvalidInputError(RmdError):
    """Raised when data or parameters fall outside their domain."""

    def __init__(self, message: str, code: str = "E_INVALID_INPUT") -> None:
        super().__init__(message, code=code)


class DimensionMismatchError(RmdError):
    """Raised when operand shapes do not agree."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="E_DIMENSION_MISMATCH")


class DegenerateInputError(RmdError):
    """Raised when an input makes the requested quantity undefined."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="E_DEGENERATE_INPUT")


class RankDeficientError(RmdError):
    """Raised when a full-rank hypothesis does not hold numerically."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="E_RANK_DEFICIENT")


class EmptyRangeError(RmdError):
    """Raised when an orthonormal basis is requested for a zero matrix."""

    def __init__(self, message: str = "Matrix has numerical rank 0; range basis is empty.") -> None:
        super().__init__(message, code="E_EMPTY_RANGE")


class AlreadyConvergedError(RmdError):
    """Raised when an extrapolated step is requested at a zero residual."""

    def __init__(self, message: str = "Residual is zero; the iterate is already an exact decomposition.") -> None:
        super().__init__(message, code="E_ALREADY_CONVERGED")


class InfeasibleLatentError(RmdError):
    """Raised when a latent matrix violates max(0, Z) = X."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="E_INFEASIBLE_LATENT")


class MatrixFormatError(RmdError):
    """Raised when a matrix file cannot be parsed."""

    def __init__(self, message: str, *, line: int | None = None) -> None:
        location = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{location}", code="E_MATRIX_FORMAT")
        self.line = line


class ConfigError(RmdError):
    """Raised when a run configuration is invalid."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="E_CONFIG")
