"""Atomic artifact writers for traces, tables and run summaries."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

from rmd.solvers.state import TraceRecord

TRACE_HEADER = ("iter", "gamma", "alpha", "delta", "accepted", "elapsed_s")


def atomic_write(path: Path, payload: str) -> None:
    """Write to a sibling temp file, then rename over the target."""
    path = Path(path)
    temp_path = path.with_name(f"{path.name}.tmp")
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_path.write_text(payload, encoding="utf-8")
    temp_path.replace(path)


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def render_csv(header: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(header), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def trace_rows(trace: Iterable[TraceRecord]) -> list[dict[str, str]]:
    return [
        {
            "iter": str(record.k),
            "gamma": format_float(record.gamma),
            "alpha": format_float(record.alpha),
            "delta": "" if record.delta is None else format_float(record.delta),
            "accepted": "1" if record.accepted else "0",
            "elapsed_s": format(record.elapsed_s, ".6f"),
        }
        for record in trace
    ]


def write_trace_csv(path: Path, trace: Iterable[TraceRecord]) -> None:
    atomic_write(path, render_csv(TRACE_HEADER, trace_rows(trace)))


def write_table_csv(path: Path, header: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> None:
    atomic_write(path, render_csv(header, rows))


def write_summary_json(path: Path, payload: Any) -> None:
    atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
