"""End-to-end recovery, compression and determinism targets at desk scale."""

from __future__ import annotations

import statistics

import numpy as np
import pytest

from pipelines.evaluation import compression_rank, edmc_relative_error
from pipelines.generators import edm, gen_identity, gen_points, gen_relu_sampling, observe_below, rng_streams
from rmd.core.matrices import FactorPair, ModelShape, model_matrix, relative_ls_rmd_error
from rmd.solvers.baseline import tsvd_baseline
from rmd.solvers.config import InitStrategy, Method, SolverConfig
from rmd.solvers.runner import solve
from rmd.solvers.state import SolveReport, StopReason
from rmd.theory.examples import identity_factors
from tests.utils import trace_without_elapsed
from tools import rmd_cli
from tools.verify_theory import cmd_verify

pytestmark = pytest.mark.slow

PLAIN = ModelShape.plain()
SEEDS = range(1, 21)


@pytest.fixture(autouse=True)
def _quiet_metrics(stub_metrics):
    return stub_metrics


def _audited(report: SolveReport) -> SolveReport:
    assert report.audit.checked
    assert report.audit.total == 0, report.audit.as_dict()
    assert report.gamma_is_monotone(slack=1e-12)
    return report


def _run(X, method, rank, seed, shape=PLAIN, **overrides) -> SolveReport:
    config = SolverConfig(rank=rank, seed=seed, check_invariants=True, **overrides)
    return _audited(solve(X, shape, config, method))


def _relu_problem(seed, sigma):
    X, _ = gen_relu_sampling(500, 500, 10, sigma, rng_streams(seed, 1)[0])
    return X


def _nudge(A, rng, size=1e-3):
    """A plus Gaussian noise of Frobenius norm size * ||A||_F."""
    noise = rng.standard_normal(A.shape)
    return A + size * np.linalg.norm(A) * noise / np.linalg.norm(noise)


def test_noiseless_recovery_ebcd_beats_bcd():
    ebcd_iters, bcd_iters = [], []
    converged = 0
    for seed in SEEDS:
        X = _relu_problem(seed, 0.0)
        ebcd = _run(X, Method.EBCD, 10, seed, maxit=2000)
        bcd = _run(X, Method.BCD, 10, seed, maxit=2000)
        converged += ebcd.stop_reason is StopReason.TOL and ebcd.gamma <= 1e-9
        ebcd_iters.append(ebcd.iterations)
        bcd_iters.append(bcd.iterations)
        assert bcd.gamma < bcd.trace[0].gamma
    assert converged >= 18
    assert statistics.median(ebcd_iters) < statistics.median(bcd_iters)


def test_noisy_recovery_reaches_noise_level():
    for seed in SEEDS:
        X = _relu_problem(seed, 1e-2)
        for method in (Method.BCD, Method.EBCD):
            report = _run(X, method, 10, seed, tol=1e-2, maxit=200)
            assert report.gamma <= 1e-2, (seed, method)


def test_edmc_clustered_recovery():
    errors = []
    for seed in range(1, 11):
        cloud = gen_points("clustered", [10] * 5, rng_streams(seed, 1)[0])
        theta = edm(cloud)
        X, d = observe_below(theta, 0.6)
        shape = ModelShape.edmc(d)
        report = _run(X, Method.EBCD, 5, seed, shape=shape, maxit=20000)
        errors.append(edmc_relative_error(model_matrix(report.factors, shape), shape, theta))
    assert statistics.median(errors) <= 1e-4


def test_identity_exactly_compressed_at_rank_three():
    X = gen_identity(16)
    exact = identity_factors(16)
    assert relative_ls_rmd_error(X, exact.product()) <= 1e-12
    gammas = []
    for seed in range(10):
        rng = np.random.default_rng(seed)
        start = FactorPair(W=_nudge(exact.W, rng), H=_nudge(exact.H, rng))
        config = SolverConfig(rank=3, seed=seed, maxit=5000, check_invariants=True)
        report = _audited(solve(X, PLAIN, config, Method.EBCD, initial=start))
        gammas.append(report.gamma)
    assert min(gammas) <= 1e-6


def test_rmd_never_loses_to_tsvd():
    for seed in range(10):
        X, _ = gen_relu_sampling(80, 60, 8, 0.0, rng_streams(seed, 1)[0])
        rank = compression_rank(X, 0.5)
        report = _run(X, Method.EBCD, rank, seed, maxit=300, init=InitStrategy.TSVD)
        baseline = tsvd_baseline(X, rank)
        assert report.ls_rmd_error <= baseline.raw_error / X.fro_norm + 1e-12


def test_theory_oracles_pass():
    assert cmd_verify() == 0


def test_converged_runs_satisfy_kkt():
    for seed in range(1, 4):
        X, _ = gen_relu_sampling(60, 60, 4, 0.0, rng_streams(seed, 1)[0])
        report = _run(X, Method.EBCD, 4, seed, maxit=5000)
        if report.stop_reason is StopReason.TOL:
            assert report.kkt.max_norm() <= 1e-6 * X.fro_norm


def test_traces_reproduce_for_identical_seeds(tmp_path):
    argv = ["solve", "--gen", "relu:m=500,n=500,r=10,sigma=0", "--method", "bcd,ebcd", "--seeds", "1..3",
            "--maxit", "200"]
    assert rmd_cli.main([*argv, "--out", str(tmp_path / "a")]) == 0
    assert rmd_cli.main([*argv, "--out", str(tmp_path / "b")]) == 0
    traces = sorted(path.name for path in (tmp_path / "a").glob("*.trace.csv"))
    assert len(traces) == 6
    for name in traces:
        assert trace_without_elapsed(tmp_path / "a" / name) == trace_without_elapsed(tmp_path / "b" / name)
    first_factors = (tmp_path / "a" / "ebcd_seed1.factors.csv").read_bytes()
    assert first_factors == (tmp_path / "b" / "ebcd_seed1.factors.csv").read_bytes()
