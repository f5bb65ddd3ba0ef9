"""Randomized audits of the identities and bounds the solvers rely on."""

from __future__ import annotations

import json
import logging
from collections.abc import Callable

import numpy as np

from pipelines.generators import gen_identity, gen_relu_sampling
from pipelines.io.schemas import CheckOutcome
from rmd.core.matrices import (
    FactorPair,
    ModelShape,
    ObservedMatrix,
    latent_update,
    model_matrix,
    relative_ls_rmd_error,
    support_from,
)
from rmd.solvers.config import Method, SolverConfig
from rmd.solvers.ebcd import ebcd_candidate
from rmd.solvers.runner import solve
from rmd.solvers.state import SolverState
from rmd.theory import examples, oracles

logger = logging.getLogger("tools.verify_theory")

DEFAULT_SEED = 20240101

Check = Callable[[np.random.Generator], CheckOutcome]


def _random_state(
    rng: np.random.Generator, m: int, n: int, r: int
) -> tuple[ObservedMatrix, SolverState]:
    X = support_from(np.maximum(0.0, rng.standard_normal((m, n))))
    factors = FactorPair(W=rng.standard_normal((m, r)), H=rng.standard_normal((r, n)))
    M = model_matrix(factors, ModelShape.plain())
    Z = latent_update(X, M)
    state = SolverState(Z=Z, factors=factors, S_norm=float(np.linalg.norm(Z - M, "fro")))
    return X, state


def check_sigma_identity(rng: np.random.Generator, samples: int = 200) -> CheckOutcome:
    worst = 0.0
    for _ in range(samples):
        X, state = _random_state(rng, 8, 8, 3)
        alpha = float(rng.uniform(1.0, 4.0))
        result = oracles.sigma_wh_check(X, state.Z, state.factors.W, state.factors.H, alpha)
        scale = max(result.lhs, 1.0)
        worst = max(worst, result.gap / scale, abs(result.decrease_form - result.rhs) / scale)
    return CheckOutcome(
        name="sigma_wh_identity", passed=worst <= 1e-9, worst=worst, detail=f"{samples} samples"
    )


def check_scheme_products(rng: np.random.Generator, samples: int = 100) -> CheckOutcome:
    worst = 0.0
    shape = ModelShape.plain()
    for _ in range(samples):
        X, state = _random_state(rng, 10, 9, 3)
        alpha = float(rng.uniform(1.0, 4.0))
        candidate, _ = ebcd_candidate(X, shape, state, alpha)
        qr_product = candidate.factors.product()
        pinv_product = oracles.ebcd_step_v1(X, shape, state, alpha).product()
        gap = np.linalg.norm(qr_product - pinv_product, "fro") / max(np.linalg.norm(qr_product, "fro"), 1.0)
        worst = max(worst, float(gap))
    return CheckOutcome(
        name="scheme_products", passed=worst <= 1e-9, worst=worst, detail=f"{samples} samples"
    )


def check_latent_bound(rng: np.random.Generator, samples: int = 1000) -> CheckOutcome:
    failures = 0
    worst = 0.0
    for _ in range(samples):
        X = support_from(np.maximum(0.0, rng.standard_normal((6, 6))))
        Z = np.where(X.mask, X.values, -np.abs(rng.standard_normal((6, 6))))
        M = rng.standard_normal((6, 6)) * rng.uniform(0.1, 3.0)
        bound = examples.latent_bound_check(X, Z, M)
        failures += not bound.holds
        worst = max(worst, bound.lhs / bound.rhs if bound.rhs > 0 else 0.0)
    return CheckOutcome(
        name="latent_bound",
        passed=failures == 0,
        worst=worst,
        detail=f"{failures} of {samples} triples violated",
    )


def check_ell(rng: np.random.Generator) -> CheckOutcome:
    del rng
    eps = 0.5
    at_kink = examples.ell(-0.5, eps)
    far = examples.ell(-1000.0, eps)
    grid = -np.geomspace(1e-6, 1e6, 1000)
    above = all(examples.ell(float(b), eps) > eps**2 for b in grid)
    passed = abs(at_kink - 1.25) <= 1e-12 and 0.25 < far < 0.2511 and above
    return CheckOutcome(
        name="ell_values",
        passed=passed,
        detail=f"ell(-0.5)={at_kink:.15g} ell(-1000)={far:.15g} grid_above={above}",
    )


def check_optimal_family(rng: np.random.Generator) -> CheckOutcome:
    del rng
    eps = 0.5
    worst = 0.0
    for v in (0.1, 1.0, 10.0):
        theta, error_sq = examples.example32_theta(v, eps)
        worst = max(worst, abs(error_sq - eps**2), abs(float(np.linalg.det(theta))))
    return CheckOutcome(name="optimal_family", passed=worst <= 1e-12, worst=worst)


def check_kkt_at_convergence(rng: np.random.Generator) -> CheckOutcome:
    X, _ = gen_relu_sampling(40, 40, 3, 0.0, rng)
    config = SolverConfig(rank=3, tol=1e-9, maxit=5000, seed=7, check_invariants=True)
    report = solve(X, ModelShape.plain(), config, Method.EBCD)
    kkt_ratio = report.kkt.max_norm() / X.fro_norm
    passed = report.gamma <= 1e-9 and kkt_ratio <= 1e-6 and report.audit.total == 0
    return CheckOutcome(
        name="kkt_at_convergence",
        passed=passed,
        worst=kkt_ratio,
        detail=(
            f"gamma={report.gamma:.3e} iterations={report.iterations} "
            f"audit_violations={report.audit.total}"
        ),
    )


def check_identity_rank3(rng: np.random.Generator) -> CheckOutcome:
    del rng
    worst = 0.0
    for n in (4, 16, 32):
        M = examples.identity_factors(n).product()
        worst = max(worst, relative_ls_rmd_error(gen_identity(n), M))
    return CheckOutcome(name="identity_rank3", passed=worst <= 1e-12, worst=worst)


CHECKS: dict[str, Check] = {
    "sigma_wh_identity": check_sigma_identity,
    "scheme_products": check_scheme_products,
    "latent_bound": check_latent_bound,
    "ell_values": check_ell,
    "optimal_family": check_optimal_family,
    "kkt_at_convergence": check_kkt_at_convergence,
    "identity_rank3": check_identity_rank3,
}


def run_checks(names: list[str] | None = None, seed: int = DEFAULT_SEED) -> list[CheckOutcome]:
    """Run the named checks (all by default), each on its own seeded stream."""
    selected = names or list(CHECKS)
    streams = np.random.SeedSequence(seed).spawn(len(selected))
    outcomes: list[CheckOutcome] = []
    for name, stream in zip(selected, streams, strict=True):
        try:
            outcome = CHECKS[name](np.random.default_rng(stream))
        except Exception as exc:
            logger.exception("Check %s raised", name)
            outcome = CheckOutcome(name=name, passed=False, detail=f"{type(exc).__name__}: {exc}")
        logger.info("check %s passed=%s %s", name, outcome.passed, outcome.detail)
        outcomes.append(outcome)
    return outcomes


def cmd_verify(json_output: bool = False) -> int:
    outcomes = run_checks()
    if json_output:
        print(json.dumps([outcome.model_dump() for outcome in outcomes], indent=2, sort_keys=True))
    else:
        for outcome in outcomes:
            status = "PASS" if outcome.passed else "FAIL"
            print(f"{status}\t{outcome.name}\t{outcome.detail}")
    return 0 if all(outcome.passed for outcome in outcomes) else 2
