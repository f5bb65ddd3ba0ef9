from pathlib import Path

from tests.utils import trace_without_elapsed
from tools import rmd_cli


def test_solve_traces_are_deterministic(tmp_path: Path, stub_metrics):
    argv = ["solve", "--gen", "relu:m=30,n=24,r=3,sigma=0.01", "--method", "bcd,ebcd,naive",
            "--seeds", "1,2", "--maxit", "25"]
    first, second = tmp_path / "first", tmp_path / "second"
    assert rmd_cli.main([*argv, "--out", str(first)]) == 0
    assert rmd_cli.main([*argv, "--out", str(second), "--workers", "3"]) == 0

    traces = sorted(first.glob("*.trace.csv"))
    assert len(traces) == 6
    for path in traces:
        assert trace_without_elapsed(path) == trace_without_elapsed(second / path.name)
        factors = path.name.replace(".trace.csv", ".factors.csv")
        assert (first / factors).read_bytes() == (second / factors).read_bytes()
