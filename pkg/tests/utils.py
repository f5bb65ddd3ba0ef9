"""File builders and trace readers for tests."""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np


def write_mtx(
    path: Path,
    dims: tuple[int, int],
    entries: Iterable[tuple[int, int, float]],
    *,
    symmetry: str = "general",
    comments: Sequence[str] = (),
) -> Path:
    """Write a Matrix Market coordinate file with 1-indexed entries."""
    entries = list(entries)
    lines = [f"%%MatrixMarket matrix coordinate real {symmetry}"]
    lines.extend(f"% {comment}" for comment in comments)
    lines.append(f"{dims[0]} {dims[1]} {len(entries)}")
    lines.extend(f"{i} {j} {value!r}" for i, j, value in entries)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_matrix_csv(path: Path, A: np.ndarray) -> Path:
    rows = [",".join(repr(float(value)) for value in row) for row in A]
    path.write_text("\n".join([f"{A.shape[0]},{A.shape[1]}", *rows]) + "\n", encoding="utf-8")
    return path


def read_trace(path: Path) -> list[dict[str, str]]:
    with path.open(encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def trace_without_elapsed(path: Path) -> list[tuple[str, ...]]:
    return [
        tuple(value for key, value in row.items() if key != "elapsed_s") for row in read_trace(path)
    ]


def accepted_gammas(rows: Iterable[dict[str, str]]) -> list[float]:
    return [float(row["gamma"]) for row in rows if row["accepted"] == "1"]


def is_non_increasing(values: Sequence[float], slack: float = 1e-12) -> bool:
    return all(later <= earlier + slack for earlier, later in zip(values, values[1:], strict=False))
