"""Run configuration: flag parsing helpers, YAML config files and validation."""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from enum import Enum
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
from pydantic.config import ConfigDict

from pipelines.generators import PointMode
from rmd.config import settings
from rmd.core.errors import ConfigError
from rmd.solvers.config import InitStrategy, Method, SolverConfig

logger = logging.getLogger("tools.run_config")

GENERATORS = {"relu", "identity"}


class Command(str, Enum):
    SOLVE = "solve"
    EDMC = "edmc"
    COMPRESS = "compress"
    EMBED = "embed"
    VERIFY = "verify"


class GeneratorSpec(BaseModel):
    """Parsed ``name:key=value,...`` generator description."""

    name: str
    params: dict[str, float] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True, extra="forbid")

    def int_param(self, key: str, default: int | None = None) -> int:
        if key not in self.params:
            if default is None:
                raise ConfigError(f"Generator '{self.name}' needs parameter '{key}'.")
            return default
        value = self.params[key]
        if value != int(value):
            raise ConfigError(f"Generator parameter '{key}' must be an integer, got {value}.")
        return int(value)


def parse_generator(text: str) -> GeneratorSpec:
    name, _, body = text.partition(":")
    name = name.strip().lower()
    if name not in GENERATORS:
        raise ConfigError(f"Unknown generator '{name}'; expected one of {sorted(GENERATORS)}.")
    params: dict[str, float] = {}
    for item in filter(None, (part.strip() for part in body.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"Generator parameter '{item}' must look like key=value.")
        try:
            params[key.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"Generator parameter '{key}' is not numeric: '{value}'.") from exc
    return GeneratorSpec(name=name, params=params)


def parse_seeds(value: str | int | list[int]) -> list[int]:
    """Accept ``7``, ``1,2,3`` or an inclusive range ``1..5``."""
    if isinstance(value, int):
        return [value]
    if isinstance(value, list):
        return [int(seed) for seed in value]
    text = str(value).strip()
    try:
        if ".." in text:
            start, _, stop = text.partition("..")
            first, last = int(start), int(stop)
            if last < first:
                raise ConfigError(f"Seed range '{text}' is empty.")
            return list(range(first, last + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"Cannot parse seeds '{text}'.") from exc


def parse_methods(value: str | list[str]) -> list[Method]:
    names = value if isinstance(value, list) else str(value).split(",")
    methods: list[Method] = []
    for name in (str(item).strip().lower() for item in names):
        if not name:
            continue
        try:
            methods.append(Method(name))
        except ValueError as exc:
            valid = ", ".join(method.value for method in Method)
            raise ConfigError(f"Unknown method '{name}'; expected one of: {valid}.") from exc
    return methods


def parse_float_list(value: str | float | list[float]) -> list[float]:
    if isinstance(value, int | float):
        return [float(value)]
    if isinstance(value, list):
        return [float(item) for item in value]
    try:
        return [float(part) for part in str(value).split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"Cannot parse number list '{value}'.") from exc


def parse_int_list(value: str | int | list[int]) -> list[int]:
    """Whole numbers only; ``2.0`` is accepted, ``2.7`` is a config error."""
    numbers = parse_float_list(value)
    for number in numbers:
        if not math.isfinite(number) or number != int(number):
            raise ConfigError(f"Expected whole numbers, got {number:g} in '{value}'.")
    return [int(number) for number in numbers]


class RunConfig(BaseModel):
    """Everything one CLI invocation needs, after flags and file are merged."""

    command: Command
    gen: GeneratorSpec | None = None
    input: Path | None = None
    methods: list[Method] = Field(default_factory=lambda: [Method.EBCD])
    seeds: list[int] = Field(default_factory=lambda: [0])
    ranks: list[int] = Field(default_factory=list)
    out: Path = Field(default_factory=lambda: Path(settings.output_dir))
    tol: float = Field(1e-9, ge=0)
    maxit: int = Field(1000, ge=0)
    time_limit: float | None = Field(None, gt=0)
    alpha_bar: float = 4.0
    mu: float = Field(0.3, gt=0)
    delta_bar: float = Field(0.8, gt=0, lt=1)
    rank_tol: float | None = Field(None, gt=0)
    init: InitStrategy = InitStrategy.RANDOM
    check_invariants: bool = False
    tau: float | None = None
    fracs: list[float] = Field(default_factory=list)
    ratio: float = Field(0.5, gt=0)
    mode: PointMode = PointMode.CLUSTERED
    counts: list[int] = Field(default_factory=list)
    baseline: bool = False
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)
    json_output: bool = False

    model_config = ConfigDict(frozen=True, extra="forbid")

    @field_validator("methods")
    @classmethod
    def _at_least_one_method(cls, value: list[Method]) -> list[Method]:
        if not value:
            raise ValueError("at least one method is required")
        return value

    @field_validator("seeds")
    @classmethod
    def _distinct_seeds(cls, value: list[int]) -> list[int]:
        if not value:
            raise ValueError("at least one seed is required")
        if any(seed < 0 for seed in value):
            raise ValueError(f"seeds must be non-negative, got {value}")
        if len(set(value)) != len(value):
            raise ValueError(f"seeds must be distinct, got {value}")
        return value

    @field_validator("ranks")
    @classmethod
    def _positive_ranks(cls, value: list[int]) -> list[int]:
        if any(rank < 1 for rank in value):
            raise ValueError(f"ranks must be >= 1, got {value}")
        return value

    @field_validator("fracs")
    @classmethod
    def _fraction_range(cls, value: list[float]) -> list[float]:
        for frac in value:
            if not 0 < frac <= 1:
                raise ValueError(f"observed fraction must lie in (0, 1], got {frac}")
        return value

    @model_validator(mode="after")
    def _check_extrapolation(self) -> RunConfig:
        if not 1 < self.alpha_bar < math.inf:
            raise ValueError(f"alpha_bar must be finite and > 1, got {self.alpha_bar}")
        if self.tau is not None and not 0 < self.tau < 1:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")
        if self.gen is not None and self.input is not None:
            raise ValueError("use either a generator or an input file, not both")
        return self

    def solver_config(self, rank: int, seed: int, **overrides: Any) -> SolverConfig:
        params: dict[str, Any] = {
            "rank": rank,
            "tol": self.tol,
            "maxit": self.maxit,
            "time_limit": self.time_limit,
            "alpha_bar": self.alpha_bar,
            "mu0": self.mu,
            "delta_bar": self.delta_bar,
            "seed": seed,
            "rank_tol": self.rank_tol,
            "init": self.init,
            "check_invariants": self.check_invariants,
        }
        params.update(overrides)
        try:
            return SolverConfig(**params)
        except ValidationError as exc:
            raise ConfigError(f"Invalid solver configuration: {exc}") from exc


FIELD_ALIASES = {
    "method": "methods",
    "seed": "seeds",
    "rank": "ranks",
    "frac": "fracs",
    "json": "json_output",
}

PARSERS = {
    "methods": parse_methods,
    "seeds": parse_seeds,
    "ranks": parse_int_list,
    "fracs": parse_float_list,
    "counts": parse_int_list,
    "gen": parse_generator,
}


def normalize_keys(raw: Mapping[str, Any]) -> dict[str, Any]:
    """Map flag-style keys (``alpha-bar``, ``seed``) onto RunConfig fields and parse them."""
    normalized: dict[str, Any] = {}
    for key, value in raw.items():
        if value is None:
            continue
        canonical = key.replace("-", "_")
        name = FIELD_ALIASES.get(canonical, canonical)
        parser = PARSERS.get(name)
        if parser is not None and not isinstance(value, dict | GeneratorSpec):
            value = parser(value)
        normalized[name] = value
    return normalized


def load_config_file(path: Path) -> dict[str, Any]:
    try:
        content = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"Cannot read config file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"Config file {path} is not valid YAML: {exc}") from exc
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigError(f"Config file {path} must hold a mapping at the top level.")
    return normalize_keys(content)


def build_run_config(
    command: Command | str,
    flags: Mapping[str, Any],
    config_path: Path | None = None,
) -> RunConfig:
    """File values first, explicit flags on top, then validation."""
    merged: dict[str, Any] = load_config_file(config_path) if config_path else {}
    overrides = normalize_keys(flags)
    if config_path:
        logger.debug("Flags overriding %s: %s", config_path, sorted(overrides))
    merged.update(overrides)
    merged["command"] = Command(command)
    try:
        return RunConfig(**merged)
    except ValidationError as exc:
        raise ConfigError(f"Invalid run configuration: {exc}") from exc
