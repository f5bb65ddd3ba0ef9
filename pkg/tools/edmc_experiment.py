"""Distance matrix completion from entries below a threshold."""

from __future__ import annotations

import json
import logging
import statistics
from typing import Any

from pipelines.evaluation import edmc_baseline, edmc_relative_error
from pipelines.generators import PointMode, edm, gen_points, observe_below, rng_streams
from pipelines.io.artifacts import write_summary_json, write_table_csv
from rmd.core.errors import ConfigError
from rmd.core.matrices import FloatMatrix, ModelShape, model_matrix
from tools.run_config import RunConfig
from tools.solve_runs import RunTask, execute_runs, print_table, publish, summarize

logger = logging.getLogger("tools.edmc_experiment")

TABLE_HEADER = ["frac", "method", "runs", "mean_error", "median_error", "max_error"]
DEFAULT_FRACS = (0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
DEFAULT_RANK = 5


def build_tasks(config: RunConfig) -> list[tuple[RunTask, FloatMatrix]]:
    """One task per (seed, fraction, method), paired with its true distance matrix.

    Seeds fix the point cloud. With ``baseline`` set, each EDMC run is paired
    with a plain solve at rank r + 1 whose method is reported as ``<method>+1``.
    """
    if len(config.ranks) > 1:
        raise ConfigError("edmc takes a single --rank.")
    rank = config.ranks[0] if config.ranks else DEFAULT_RANK
    fracs = config.fracs or list(DEFAULT_FRACS)
    mode = config.mode
    counts: int | list[int] | None = config.counts or None
    if mode is PointMode.UNIFORM and counts is not None:
        counts = sum(counts)
    tasks: list[tuple[RunTask, FloatMatrix]] = []
    for seed in config.seeds:
        theta = edm(gen_points(mode, counts, rng_streams(seed, 1)[0]))
        for frac in fracs:
            X, d = observe_below(theta, frac)
            context = {"frac": frac, "d": d}
            solver_config = config.solver_config(rank, seed)
            for method in config.methods:
                variants = [(method.value, ModelShape.edmc(d), solver_config)]
                if config.baseline:
                    variants.append((f"{method.value}+1", *edmc_baseline(solver_config)))
                for name, shape, variant_config in variants:
                    task = RunTask(
                        label=f"{name}_frac{frac:g}_seed{seed}",
                        method=method,
                        seed=seed,
                        X=X,
                        shape=shape,
                        config=variant_config,
                        context={**context, "variant": name},
                    )
                    tasks.append((task, theta))
    return tasks


def run_edmc(config: RunConfig) -> tuple[list[dict[str, Any]], list[dict[str, Any]]]:
    """Solve every task; returns per-run records and the per-(frac, method) table."""
    pairs = build_tasks(config)
    results = execute_runs([task for task, _ in pairs], config.workers)
    summaries = summarize(results)
    publish("edmc", summaries)
    records: list[dict[str, Any]] = []
    for (task, theta), result, summary in zip(pairs, results, summaries, strict=True):
        d = float(task.context["d"])
        M = model_matrix(result.report.factors, task.shape)
        records.append(
            {
                "label": task.label,
                "method": task.context["variant"],
                "frac": float(task.context["frac"]),
                "seed": task.seed,
                "error": edmc_relative_error(M, ModelShape.edmc(d), theta),
                "summary": summary.model_dump(mode="json"),
            }
        )
    return records, aggregate(records)


def aggregate(records: list[dict[str, Any]]) -> list[dict[str, Any]]:
    groups: dict[tuple[float, str], list[float]] = {}
    for record in records:
        groups.setdefault((record["frac"], record["method"]), []).append(record["error"])
    return [
        {
            "frac": frac,
            "method": method,
            "runs": len(errors),
            "mean_error": statistics.fmean(errors),
            "median_error": statistics.median(errors),
            "max_error": max(errors),
        }
        for (frac, method), errors in sorted(groups.items())
    ]


def cmd_edmc(config: RunConfig) -> int:
    records, rows = run_edmc(config)
    write_table_csv(config.out / "edmc_results.csv", TABLE_HEADER, rows)
    payload = {"command": "edmc", "runs": records, "table": rows}
    write_summary_json(config.out / "summary.json", payload)
    if config.json_output:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print_table(TABLE_HEADER, rows)
    logger.info("edmc wrote %d table rows to %s", len(rows), config.out)
    return 0
