"""Structured run events for the experiment CLI."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from threading import Lock
from typing import Any

from pipelines.io.schemas import RunSummary

UTC = timezone.utc  # datetime.UTC alias (3.11+); identical object on older interpreters

logger = logging.getLogger("tools.telemetry")

FORMAT_ENV = "RMD_TELEMETRY_FORMAT"
PATH_ENV = "RMD_TELEMETRY_PATH"


@dataclass(frozen=True)
class TelemetryConfig:
    format: str = "text"
    path: Path | None = None

    @classmethod
    def from_env(cls) -> TelemetryConfig:
        fmt = (os.getenv(FORMAT_ENV) or "text").strip().lower()
        path_value = os.getenv(PATH_ENV)
        path = Path(path_value).expanduser() if path_value else None
        return cls(format=fmt if fmt in {"json", "text"} else "text", path=path)


class Telemetry:
    """Emit events to the log and, optionally, append them as JSON lines to a file."""

    def __init__(self, config: TelemetryConfig) -> None:
        self._config = config
        self._lock = Lock()
        if self._config.path:
            self._config.path.parent.mkdir(parents=True, exist_ok=True)

    def emit(self, module: str, event: str, **fields: Any) -> None:
        payload = {
            "timestamp": datetime.now(UTC).isoformat().replace("+00:00", "Z"),
            "module": module,
            "event": event,
            **fields,
        }
        serialized = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
        if self._config.format == "json":
            logger.info(serialized)
        else:
            logger.info("%s %s %s", module, event, fields)
        self._write_to_file(serialized)

    def run_completed(self, command: str, summary: RunSummary) -> None:
        self.emit(
            "rmd.cli",
            "run.completed",
            command=command,
            label=summary.label,
            method=summary.method,
            seed=summary.seed,
            gamma=summary.gamma,
            stop_reason=summary.stop_reason,
            iterations=summary.iterations,
            elapsed_s=round(summary.elapsed_s, 6),
        )

    def _write_to_file(self, line: str) -> None:
        if not self._config.path:
            return
        try:
            with self._lock, self._config.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
        except OSError as exc:  # pragma: no cover
            logger.warning("TELEMETRY_WRITE_ERROR path=%s error=%s", self._config.path, exc)


_TELEMETRY: Telemetry | None = None


def get_telemetry() -> Telemetry:
    global _TELEMETRY  # noqa: PLW0603
    if _TELEMETRY is None:
        _TELEMETRY = Telemetry(TelemetryConfig.from_env())
    return _TELEMETRY


def reset_telemetry_for_testing() -> None:  # pragma: no cover - test helper
    global _TELEMETRY  # noqa: PLW0603
    _TELEMETRY = None
