"""Serialized run records shared by the CLI tools."""

from __future__ import annotations

from pydantic import BaseModel, Field
from pydantic.config import ConfigDict

from rmd.solvers.state import SolveReport


class RunSummary(BaseModel):
    """Final diagnostics of one solver run."""

    label: str = Field(..., min_length=1)
    method: str
    seed: int
    rank: int = Field(..., ge=1)
    dims: tuple[int, int]
    gamma: float = Field(..., ge=0)
    ls_rmd_error: float = Field(..., ge=0)
    kkt: dict[str, float]
    stop_reason: str
    iterations: int = Field(..., ge=0)
    accepted_steps: int = Field(..., ge=0)
    rejected_steps: int = Field(..., ge=0)
    elapsed_s: float = Field(..., ge=0)
    avg_iter_time: float = Field(..., ge=0)
    audit: dict[str, int | bool]
    extra: dict[str, float] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True, extra="forbid")

    @classmethod
    def from_report(
        cls,
        label: str,
        seed: int,
        report: SolveReport,
        *,
        dims: tuple[int, int],
        extra: dict[str, float] | None = None,
    ) -> RunSummary:
        return cls(
            label=label,
            method=report.method,
            seed=seed,
            rank=report.factors.rank,
            dims=dims,
            gamma=report.gamma,
            ls_rmd_error=report.ls_rmd_error,
            kkt=report.kkt.as_dict(),
            stop_reason=report.stop_reason.value,
            iterations=report.iterations,
            accepted_steps=report.accepted_steps,
            rejected_steps=report.rejected_steps,
            elapsed_s=report.elapsed_s,
            avg_iter_time=report.avg_iter_time,
            audit=report.audit.as_dict(),
            extra=extra or {},
        )


class CheckOutcome(BaseModel):
    """Result of one theory check."""

    name: str
    passed: bool
    detail: str = ""
    worst: float | None = None

    model_config = ConfigDict(frozen=True, extra="forbid")
