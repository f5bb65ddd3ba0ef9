from __future__ import annotations

import pytest

from pipelines.generators import gen_relu_sampling
from rmd.core.matrices import ModelShape
from rmd.solvers.config import Method, SolverConfig
from rmd.solvers.runner import solve
from rmd.solvers.state import StopReason

pytestmark = [pytest.mark.benchmark, pytest.mark.slow]


@pytest.fixture(scope="module")
def relu_problem():
    X, _ = gen_relu_sampling(300, 300, 10, 0.0, seed=11)
    return X


@pytest.mark.parametrize("method", [Method.BCD, Method.EBCD])
def test_solver_reaches_tolerance(benchmark, stub_metrics, relu_problem, method):
    config = SolverConfig(rank=10, tol=1e-9, maxit=2000, seed=3)

    report = benchmark.pedantic(
        solve, args=(relu_problem, ModelShape.plain(), config, method), iterations=1, rounds=1
    )

    assert report.stop_reason is StopReason.TOL
    assert report.gamma_is_monotone()
    benchmark.extra_info["iterations"] = report.iterations
    benchmark.extra_info["avg_iter_time"] = report.avg_iter_time
