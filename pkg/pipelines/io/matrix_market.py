"""Matrix Market coordinate reader for sparse nonnegative inputs."""

from __future__ import annotations

import logging
import math
from pathlib import Path

import numpy as np

from rmd.core.errors import InvalidInputError, MatrixFormatError
from rmd.core.matrices import ObservedMatrix, support_from

logger = logging.getLogger("pipelines.io.matrix_market")

BANNER = "%%matrixmarket"
SUPPORTED_FIELDS = {"real", "integer"}
SUPPORTED_SYMMETRY = {"general", "symmetric"}


def _parse_header(line: str) -> str:
    tokens = line.strip().lower().split()
    if len(tokens) != 5 or tokens[0] != BANNER:
        raise MatrixFormatError("Missing or malformed %%MatrixMarket header", line=1)
    _, obj, fmt, field, symmetry = tokens
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixFormatError(f"Only 'matrix coordinate' files are supported, got '{obj} {fmt}'", line=1)
    if field not in SUPPORTED_FIELDS:
        raise MatrixFormatError(f"Unsupported field '{field}'", line=1)
    if symmetry not in SUPPORTED_SYMMETRY:
        raise MatrixFormatError(f"Unsupported symmetry '{symmetry}'", line=1)
    return symmetry


def read_matrix_market(path: Path) -> ObservedMatrix:
    """Parse a coordinate file into a dense ObservedMatrix.

    Symmetric storage is expanded to full. Repeated coordinates are summed.
    Explicit zeros are kept out of the support.
    """
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InvalidInputError(f"Cannot read matrix file {path}: {exc}") from exc
    if not lines:
        raise MatrixFormatError("Empty matrix file", line=1)
    symmetry = _parse_header(lines[0])

    values: np.ndarray | None = None
    expected = 0
    seen = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        tokens = text.split()
        if values is None:
            try:
                m, n, expected = (int(token) for token in tokens)
            except ValueError as exc:
                raise MatrixFormatError("Size line must be 'rows cols entries'", line=lineno) from exc
            if m < 1 or n < 1 or expected < 0:
                raise MatrixFormatError(f"Invalid size line '{text}'", line=lineno)
            if symmetry == "symmetric" and m != n:
                raise MatrixFormatError("Symmetric matrix must be square", line=lineno)
            values = np.zeros((m, n), dtype=np.float64)
            continue
        if len(tokens) != 3:
            raise MatrixFormatError(f"Expected 'row col value', got '{text}'", line=lineno)
        try:
            i, j, value = int(tokens[0]), int(tokens[1]), float(tokens[2])
        except ValueError as exc:
            raise MatrixFormatError(f"Unparseable entry '{text}'", line=lineno) from exc
        m, n = values.shape
        if not (1 <= i <= m and 1 <= j <= n):
            raise MatrixFormatError(f"Index ({i}, {j}) outside {m}x{n}", line=lineno)
        if not math.isfinite(value):
            raise MatrixFormatError(f"Non-finite value '{tokens[2]}'", line=lineno)
        if value < 0:
            raise InvalidInputError(f"Negative entry {value} at ({i}, {j}) on line {lineno}.")
        if symmetry == "symmetric" and j > i:
            raise MatrixFormatError("Symmetric files store the lower triangle only", line=lineno)
        values[i - 1, j - 1] += value
        if symmetry == "symmetric" and i != j:
            values[j - 1, i - 1] += value
        seen += 1
    if values is None:
        raise MatrixFormatError("Missing size line", line=len(lines) + 1)
    if seen != expected:
        raise MatrixFormatError(f"Header declares {expected} entries but {seen} were read", line=len(lines))
    X = support_from(values)
    logger.info("Read %s: dims=%s nnz=%d symmetry=%s", path, X.dims, X.nnz, symmetry)
    return X
