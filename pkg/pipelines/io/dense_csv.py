"""Dense CSV matrices and factor files.

A matrix file starts with an ``m,n`` header followed by m rows of n values.
A factor file starts with ``m,n,r`` followed by the m rows of W and then the
r rows of H. Values use 17 significant digits so reads are bit-exact.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path

import numpy as np

from pipelines.io.artifacts import atomic_write, format_float
from rmd.core.errors import InvalidInputError, MatrixFormatError
from rmd.core.matrices import FactorPair, FloatMatrix

logger = logging.getLogger("pipelines.io.dense_csv")


def _read_lines(path: Path) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InvalidInputError(f"Cannot read {path}: {exc}") from exc


def _parse_header(line: str, arity: int) -> tuple[int, ...]:
    tokens = [token.strip() for token in line.split(",")]
    expected = ("m", "n", "r")[:arity]
    if len(tokens) != arity:
        raise MatrixFormatError(f"Header must be '{','.join(expected)}', got '{line}'", line=1)
    try:
        dims = tuple(int(token) for token in tokens)
    except ValueError as exc:
        raise MatrixFormatError(f"Header must hold integers, got '{line}'", line=1) from exc
    if any(dim < 1 for dim in dims):
        raise MatrixFormatError(f"Header dimensions must be positive, got '{line}'", line=1)
    return dims


def _parse_rows(lines: list[str], start: int, rows: int, cols: int) -> FloatMatrix:
    data = np.empty((rows, cols), dtype=np.float64)
    for offset in range(rows):
        lineno = start + offset + 1
        if start + offset >= len(lines):
            raise MatrixFormatError(f"Expected {rows} rows, file ended early", line=lineno)
        tokens = lines[start + offset].split(",")
        if len(tokens) != cols:
            raise MatrixFormatError(f"Expected {cols} values, got {len(tokens)}", line=lineno)
        try:
            values = [float(token) for token in tokens]
        except ValueError as exc:
            raise MatrixFormatError("Unparseable value", line=lineno) from exc
        if not all(math.isfinite(value) for value in values):
            raise MatrixFormatError("Non-finite value", line=lineno)
        data[offset] = values
    return data


def _check_trailing(lines: list[str], consumed: int) -> None:
    for lineno, line in enumerate(lines[consumed:], start=consumed + 1):
        if line.strip():
            raise MatrixFormatError("Unexpected data after the declared rows", line=lineno)


def read_dense_csv(path: Path) -> FloatMatrix:
    lines = _read_lines(path)
    if not lines:
        raise MatrixFormatError("Empty matrix file", line=1)
    m, n = _parse_header(lines[0], 2)
    data = _parse_rows(lines, 1, m, n)
    _check_trailing(lines, 1 + m)
    return data


def _render_rows(A: FloatMatrix) -> list[str]:
    return [",".join(format_float(value) for value in row) for row in np.asarray(A)]


def write_dense_csv(path: Path, A: FloatMatrix) -> None:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise InvalidInputError("Only two-dimensional matrices can be written.")
    lines = [f"{A.shape[0]},{A.shape[1]}", *_render_rows(A)]
    atomic_write(path, "\n".join(lines) + "\n")


def write_factors(path: Path, factors: FactorPair) -> None:
    m, n = factors.dims
    lines = [f"{m},{n},{factors.rank}", *_render_rows(factors.W), *_render_rows(factors.H)]
    atomic_write(path, "\n".join(lines) + "\n")
    logger.debug("Wrote %dx%d rank-%d factors to %s", m, n, factors.rank, path)


def read_factors(path: Path) -> FactorPair:
    lines = _read_lines(path)
    if not lines:
        raise MatrixFormatError("Empty factor file", line=1)
    m, n, r = _parse_header(lines[0], 3)
    W = _parse_rows(lines, 1, m, r)
    H = _parse_rows(lines, 1 + m, r, n)
    _check_trailing(lines, 1 + m + r)
    return FactorPair(W=W, H=H)
