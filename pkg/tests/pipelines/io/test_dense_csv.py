from __future__ import annotations

import numpy as np
import pytest

from pipelines.io.dense_csv import read_dense_csv, read_factors, write_dense_csv, write_factors
from rmd.core.errors import MatrixFormatError
from rmd.core.matrices import FactorPair
from tests.utils import write_matrix_csv


def test_dense_matrix_values_are_bit_exact(tmp_path, rng):
    A = rng.standard_normal((4, 3))
    path = tmp_path / "A.csv"
    write_dense_csv(path, A)
    np.testing.assert_array_equal(read_dense_csv(path), A)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "4,3"


def test_reads_hand_written_file(tmp_path):
    path = write_matrix_csv(tmp_path / "B.csv", np.array([[1.0, 0.0], [0.25, 2.0]]))
    np.testing.assert_array_equal(read_dense_csv(path), [[1.0, 0.0], [0.25, 2.0]])


def test_factor_file_layout(tmp_path):
    factors = FactorPair(W=np.array([[1.0], [2.0], [3.0]]), H=np.array([[0.5, -0.5]]))
    path = tmp_path / "f.csv"
    write_factors(path, factors)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines == ["3,2,1", "1", "2", "3", "0.5,-0.5"]
    loaded = read_factors(path)
    np.testing.assert_array_equal(loaded.product(), factors.product())


@pytest.mark.parametrize(
    ("content", "line"),
    [
        ("2\n1,2\n", 1),
        ("2,2\n1,2\n", 3),
        ("2,2\n1,2\n3\n", 3),
        ("1,2\n1,x\n", 2),
        ("1,2\n1,nan\n", 2),
        ("1,1\n1\n9\n", 3),
    ],
)
def test_malformed_files_report_the_line(tmp_path, content, line):
    path = tmp_path / "bad.csv"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(MatrixFormatError) as excinfo:
        read_dense_csv(path)
    assert excinfo.value.line == line


def test_no_temp_file_left_behind(tmp_path):
    write_dense_csv(tmp_path / "out" / "A.csv", np.eye(2))
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["A.csv"]
