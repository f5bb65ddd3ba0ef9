"""Batched solver runs and the ``solve`` command."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from pipelines.generators import gen_identity, gen_relu_sampling, rng_streams
from pipelines.io.artifacts import write_summary_json, write_trace_csv
from pipelines.io.dense_csv import read_dense_csv, write_factors
from pipelines.io.matrix_market import read_matrix_market
from pipelines.io.schemas import RunSummary
from rmd.core.errors import ConfigError
from rmd.core.matrices import ModelShape, ObservedMatrix, support_from
from rmd.solvers.config import Method, SolverConfig
from rmd.solvers.runner import solve
from rmd.solvers.state import SolveReport
from tools.run_config import RunConfig
from tools.telemetry import get_telemetry

logger = logging.getLogger("tools.solve_runs")


@dataclass(frozen=True, eq=False)
class RunTask:
    label: str
    method: Method
    seed: int
    X: ObservedMatrix
    shape: ModelShape
    config: SolverConfig
    context: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class RunResult:
    task: RunTask
    report: SolveReport


def _run_one(task: RunTask) -> RunResult:
    return RunResult(task=task, report=solve(task.X, task.shape, task.config, task.method))


def execute_runs(tasks: list[RunTask], workers: int = 1) -> list[RunResult]:
    """Run independent solves, optionally on a thread pool; results keep task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [_run_one(task) for task in tasks]
    results: list[RunResult | None] = [None] * len(tasks)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(_run_one, task): index for index, task in enumerate(tasks)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    logger.info("Completed %d runs on %d workers", len(tasks), workers)
    return [result for result in results if result is not None]


def read_input_matrix(path: Path) -> ObservedMatrix:
    """Matrix Market for ``.mtx`` files, dense CSV otherwise."""
    if Path(path).suffix.lower() == ".mtx":
        return read_matrix_market(path)
    return support_from(read_dense_csv(path))


def load_problem(config: RunConfig, seed: int) -> tuple[ObservedMatrix, int | None]:
    """The matrix for one seed plus the generator's rank, when it has one.

    Generated problems draw from a stream spawned off the run seed, so the
    problem and the solver's initial factors never share random numbers. An
    explicit ``seed=`` generator parameter pins one problem for all runs.
    """
    if config.input is not None:
        return read_input_matrix(config.input), None
    spec = config.gen
    if spec is None:
        raise ConfigError("Provide --input or --gen.")
    if spec.name == "identity":
        return gen_identity(spec.int_param("n", 16)), None
    problem_seed = spec.int_param("seed", -1)
    stream = problem_seed if problem_seed >= 0 else rng_streams(seed, 1)[0]
    r = spec.int_param("r")
    X, _ = gen_relu_sampling(
        spec.int_param("m"), spec.int_param("n"), r, spec.params.get("sigma", 0.0), stream
    )
    return X, r


def resolve_rank(config: RunConfig, generator_rank: int | None) -> int:
    if len(config.ranks) > 1:
        raise ConfigError("solve takes a single --rank.")
    if config.ranks:
        return config.ranks[0]
    if generator_rank is not None:
        return generator_rank
    raise ConfigError("--rank is required for this problem.")


def summarize(results: list[RunResult]) -> list[RunSummary]:
    return [
        RunSummary.from_report(
            result.task.label,
            result.task.seed,
            result.report,
            dims=result.task.X.dims,
            extra={
                key: float(value)
                for key, value in result.task.context.items()
                if isinstance(value, int | float)
            },
        )
        for result in results
    ]


def write_run_artifacts(out_dir: Path, results: list[RunResult], *, factors: bool = True) -> None:
    for result in results:
        write_trace_csv(out_dir / f"{result.task.label}.trace.csv", result.report.trace)
        if factors:
            write_factors(out_dir / f"{result.task.label}.factors.csv", result.report.factors)


def publish(command: str, summaries: list[RunSummary]) -> None:
    telemetry = get_telemetry()
    for summary in summaries:
        telemetry.run_completed(command, summary)


def print_table(header: list[str], rows: list[dict[str, Any]]) -> None:
    print("\t".join(header))
    for row in rows:
        print("\t".join(_cell(row.get(column)) for column in header))


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return "" if value is None else str(value)


def cmd_solve(config: RunConfig) -> int:
    tasks: list[RunTask] = []
    for seed in config.seeds:
        X, generator_rank = load_problem(config, seed)
        rank = resolve_rank(config, generator_rank)
        for method in config.methods:
            tasks.append(
                RunTask(
                    label=f"{method.value}_seed{seed}",
                    method=method,
                    seed=seed,
                    X=X,
                    shape=ModelShape.plain(),
                    config=config.solver_config(rank, seed),
                )
            )
    results = execute_runs(tasks, config.workers)
    summaries = summarize(results)
    write_run_artifacts(config.out, results)
    payload = {"command": "solve", "runs": [summary.model_dump(mode="json") for summary in summaries]}
    write_summary_json(config.out / "summary.json", payload)
    publish("solve", summaries)
    if config.json_output:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print_table(
            ["label", "stop_reason", "iterations", "gamma", "ls_rmd_error"],
            [summary.model_dump() for summary in summaries],
        )
    logger.info("solve wrote %d runs to %s", len(summaries), config.out)
    return 0
