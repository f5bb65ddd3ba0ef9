from __future__ import annotations

import pytest

from pipelines.generators import PointMode
from rmd.core.errors import ConfigError
from rmd.solvers.config import InitStrategy, Method
from tools.run_config import (
    Command,
    build_run_config,
    parse_generator,
    parse_int_list,
    parse_methods,
    parse_seeds,
)


@pytest.mark.parametrize(
    ("value", "expected"),
    [("1..5", [1, 2, 3, 4, 5]), ("1,3", [1, 3]), (7, [7]), ([2, 4], [2, 4]), ("9", [9])],
)
def test_parse_seeds(value, expected):
    assert parse_seeds(value) == expected


@pytest.mark.parametrize("value", ["5..1", "a..b", "x"])
def test_parse_seeds_rejects_garbage(value):
    with pytest.raises(ConfigError):
        parse_seeds(value)


def test_parse_methods_names_unknown_method():
    assert parse_methods("bcd, EBCD") == [Method.BCD, Method.EBCD]
    with pytest.raises(ConfigError, match="'em'"):
        parse_methods("bcd,em")


def test_parse_generator():
    spec = parse_generator("relu:m=20,n=10,r=2,sigma=0.1")
    assert spec.name == "relu"
    assert spec.int_param("m") == 20
    assert spec.params["sigma"] == 0.1
    assert parse_generator("identity").int_param("n", 16) == 16
    with pytest.raises(ConfigError):
        parse_generator("relu:m=2.5").int_param("m")
    with pytest.raises(ConfigError):
        parse_generator("relu:m").params
    with pytest.raises(ConfigError):
        parse_generator("gaussian:m=2")


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "method: bcd,naive\nseeds: 1..3\nalpha-bar: 3.0\nmaxit: 50\ninit: tsvd\n", encoding="utf-8"
    )
    config = build_run_config("solve", {"maxit": 10, "gen": "identity:n=8", "rank": "3"}, path)
    assert config.command is Command.SOLVE
    assert config.methods == [Method.BCD, Method.NAIVE]
    assert config.seeds == [1, 2, 3]
    assert config.alpha_bar == 3.0
    assert config.maxit == 10
    assert config.ranks == [3]
    assert config.init is InitStrategy.TSVD
    solver = config.solver_config(3, seed=2)
    assert solver.alpha_bar == 3.0
    assert solver.seed == 2
    assert solver.mu0 == 0.3


@pytest.mark.parametrize(
    "flags",
    [
        {"seeds": "1,1"},
        {"seeds": "-1"},
        {"alpha_bar": 1.0},
        {"delta_bar": 1.5},
        {"frac": "0"},
        {"tau": 1.0},
        {"rank": "0"},
        {"unknown_flag": 3},
    ],
)
def test_invalid_run_configs(flags):
    with pytest.raises(ConfigError):
        build_run_config("solve", flags)


def test_generator_and_input_are_exclusive(tmp_path):
    with pytest.raises(ConfigError):
        build_run_config("solve", {"gen": "identity", "input": tmp_path / "X.mtx"})


def test_config_file_must_be_a_mapping(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        build_run_config("solve", {}, path)
    path.write_text("method: [bcd\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        build_run_config("solve", {}, path)


def test_parse_int_list_accepts_whole_numbers():
    assert parse_int_list("2,3.0") == [2, 3]
    assert parse_int_list(4) == [4]


@pytest.mark.parametrize("flags", [{"rank": "2.7"}, {"counts": "10,10.9"}, {"rank": "inf"}])
def test_fractional_integer_flags_are_rejected(flags):
    with pytest.raises(ConfigError, match="whole numbers"):
        build_run_config("edmc", flags)


def test_point_mode_is_validated(tmp_path):
    path = tmp_path / "edmc.yaml"
    path.write_text("mode: uniform\n", encoding="utf-8")
    assert build_run_config("edmc", {}, path).mode is PointMode.UNIFORM
    path.write_text("mode: spiral\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="mode"):
        build_run_config("edmc", {}, path)
