"""Threshold-similarity embedding: similarity matrix, RMD, recovered points, MAD."""

from __future__ import annotations

import json
import logging
import statistics
from typing import Any

from pipelines.embedding import embed_from_theta, gram_from_threshold, mad, tsm_similarity
from pipelines.generators import PointCloud
from pipelines.io.artifacts import write_summary_json, write_table_csv
from pipelines.io.dense_csv import read_dense_csv
from rmd.core.errors import ConfigError, DegenerateInputError
from rmd.core.matrices import ModelShape
from tools.run_config import RunConfig
from tools.solve_runs import RunTask, execute_runs, print_table, publish, summarize

logger = logging.getLogger("tools.embed_experiment")

TABLE_HEADER = ["rank", "method", "mad", "avg_iter_time"]


def run_embed(config: RunConfig) -> tuple[list[dict[str, Any]], list[dict[str, Any]]]:
    """Rows of the points file are the vectors z_i (points or count profiles)."""
    if config.input is None:
        raise ConfigError("embed needs --input with a dense CSV of points.")
    if config.tau is None:
        raise ConfigError("embed needs --tau in (0, 1).")
    if not config.ranks:
        raise ConfigError("embed needs at least one --rank.")
    cloud = PointCloud(points=read_dense_csv(config.input))
    X = tsm_similarity(cloud, config.tau)
    try:
        mad(cloud, cloud, config.tau)
    except DegenerateInputError as exc:
        logger.warning("Skipping embed run: %s", exc)
        return [], []
    tasks = [
        RunTask(
            label=f"{method.value}_rank{rank}_seed{seed}",
            method=method,
            seed=seed,
            X=X,
            shape=ModelShape.plain(),
            config=config.solver_config(rank, seed),
            context={"rank": rank},
        )
        for rank in config.ranks
        for method in config.methods
        for seed in config.seeds
    ]
    results = execute_runs(tasks, config.workers)
    summaries = summarize(results)
    publish("embed", summaries)
    deviations: dict[tuple[int, str], list[float]] = {}
    timings: dict[tuple[int, str], list[float]] = {}
    for result in results:
        rank = int(result.task.context["rank"])
        theta = result.report.factors.product()
        embedded = embed_from_theta(gram_from_threshold(theta, config.tau), min(rank, len(cloud)))
        key = (rank, result.task.method.value)
        deviations.setdefault(key, []).append(mad(cloud, embedded, config.tau))
        timings.setdefault(key, []).append(result.report.avg_iter_time)
    rows = [
        {
            "rank": rank,
            "method": method,
            "mad": statistics.fmean(deviations[(rank, method)]),
            "avg_iter_time": statistics.fmean(timings[(rank, method)]),
        }
        for rank, method in deviations
    ]
    logger.info("Embedded %d points at ranks %s (X density %.3f)", len(cloud), config.ranks, X.density)
    return [summary.model_dump(mode="json") for summary in summaries], rows


def cmd_embed(config: RunConfig) -> int:
    runs, rows = run_embed(config)
    write_table_csv(config.out / "embed_results.csv", TABLE_HEADER, rows)
    payload = {"command": "embed", "runs": runs, "table": rows}
    write_summary_json(config.out / "summary.json", payload)
    if config.json_output:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print_table(TABLE_HEADER, rows)
    return 0
