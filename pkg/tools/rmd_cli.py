"""Command-line entry point: ``rmd {solve,edmc,compress,embed,verify}``.

Exit codes: 0 when the command completed (converged or not), 1 for input or
configuration errors, 2 when ``verify`` finds a failing check.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from rmd.config import settings
from rmd.core.errors import RmdError
from tools.compress_experiment import cmd_compress
from tools.edmc_experiment import cmd_edmc
from tools.embed_experiment import cmd_embed
from tools.run_config import Command, build_run_config
from tools.solve_runs import cmd_solve
from tools.verify_theory import cmd_verify

logger = logging.getLogger("tools.rmd_cli")

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VERIFY_FAILED = 2


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="YAML run config; explicit flags win.")
    parser.add_argument("--method", help="Comma-separated methods: bcd, ebcd, naive.")
    seeds = parser.add_mutually_exclusive_group()
    seeds.add_argument("--seeds", help="Seed list '1,2,3' or inclusive range '1..5'.")
    seeds.add_argument("--seed", type=int, help="Single seed.")
    parser.add_argument("--rank", help="Decomposition rank (a comma list for embed).")
    parser.add_argument("--tol", type=float, help="Relative residual tolerance (default 1e-9).")
    parser.add_argument("--maxit", type=int, help="Iteration cap (default 1000).")
    parser.add_argument("--time-limit", dest="time_limit", type=float, help="Wall-clock seconds per run.")
    parser.add_argument("--alpha-bar", dest="alpha_bar", type=float, help="Extrapolation cap (default 4).")
    parser.add_argument("--mu", type=float, help="Initial extrapolation increment (default 0.3).")
    parser.add_argument("--delta-bar", dest="delta_bar", type=float, help="Sufficient decrease (default 0.8).")
    parser.add_argument("--rank-tol", dest="rank_tol", type=float, help="Relative numerical-rank cutoff.")
    parser.add_argument("--init", choices=["random", "tsvd"], help="Initial factors (default random).")
    parser.add_argument(
        "--check-invariants", dest="check_invariants", action="store_true", default=None,
        help="Audit feasibility, monotonicity and the latent bound at every iterate.",
    )
    parser.add_argument("--out", type=Path, help=f"Output directory (default {settings.output_dir}).")
    parser.add_argument("--workers", type=int, help="Parallel runs (default 1).")
    parser.add_argument("--json", action="store_true", default=None, help="Print machine-readable results.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmd", description="ReLU matrix decomposition experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Run solvers on a generated or ingested matrix.")
    source = solve.add_mutually_exclusive_group()
    source.add_argument("--gen", help="Generator, e.g. relu:m=200,n=200,r=10,sigma=0 or identity:n=16.")
    source.add_argument("--input", type=Path, help="Matrix Market (.mtx) or dense CSV file.")
    _add_solver_flags(solve)

    edmc = sub.add_parser("edmc", help="Distance matrix completion from thresholded entries.")
    edmc.add_argument("--mode", choices=["uniform", "clustered"])
    edmc.add_argument("--counts", help="Point count (uniform) or cluster sizes (clustered).")
    edmc.add_argument("--frac", help="Observed fraction(s), comma-separated, in (0, 1].")
    edmc.add_argument("--baseline", action="store_true", default=None, help="Add rank r+1 plain runs.")
    _add_solver_flags(edmc)

    compress = sub.add_parser("compress", help="Compress a sparse matrix and compare with the TSVD.")
    source = compress.add_mutually_exclusive_group()
    source.add_argument("--input", type=Path, help="Matrix Market (.mtx) or dense CSV file.")
    source.add_argument("--gen", help="Generator spec, as for solve.")
    compress.add_argument("--ratio", type=float, help="Storage ratio for the rank rule (default 0.5).")
    _add_solver_flags(compress)

    embed = sub.add_parser("embed", help="Threshold-similarity embedding and MAD.")
    embed.add_argument("--input", type=Path, help="Dense CSV with one point per row.")
    embed.add_argument("--tau", type=float, help="Similarity threshold in (0, 1).")
    _add_solver_flags(embed)

    verify = sub.add_parser("verify", help="Run the theory oracle suite.")
    verify.add_argument("--json", action="store_true", help="Print machine-readable results.")
    return parser


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def _flags(args: argparse.Namespace) -> dict[str, Any]:
    ignored = {"command", "config"}
    flags = {key: value for key, value in vars(args).items() if key not in ignored}
    if flags.get("seed") is not None:
        flags["seeds"] = flags.pop("seed")
    flags.pop("seed", None)
    return flags


HANDLERS = {
    Command.SOLVE: cmd_solve,
    Command.EDMC: cmd_edmc,
    Command.COMPRESS: cmd_compress,
    Command.EMBED: cmd_embed,
}


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(
        level=settings.log_level.upper(), format="%(asctime)s %(levelname)s [%(name)s] %(message)s"
    )
    try:
        args = parse_args(argv if argv is not None else sys.argv[1:])
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT_ERROR
    command = Command(args.command)
    if command is Command.VERIFY:
        code = cmd_verify(json_output=args.json)
        if code != EXIT_OK:
            logger.error("Theory verification failed")
        return code
    try:
        config = build_run_config(command, _flags(args), args.config)
        return HANDLERS[command](config)
    except RmdError as exc:
        logger.error("%s failed: %s (code=%s)", command.value, exc, exc.code)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
