from __future__ import annotations

import numpy as np
import pytest

from rmd.core.errors import EmptyRangeError, InvalidInputError
from rmd.solvers.linalg import (
    best_rank_approximation,
    numerical_rank,
    orthonormal_range_basis,
    pinv,
    truncated_svd,
)


def test_rank_one_basis_is_normalized_column():
    A = np.array([[1.0], [1.0]]) @ np.array([[2.0, 0.0]])
    Q = orthonormal_range_basis(A)
    assert Q.shape == (2, 1)
    np.testing.assert_allclose(np.abs(Q[:, 0]), [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-15)


def test_identity_basis_is_orthogonal():
    Q = orthonormal_range_basis(np.eye(3))
    assert Q.shape == (3, 3)
    np.testing.assert_allclose(Q.T @ Q, np.eye(3), atol=1e-14)


def test_basis_reproduces_full_rank_matrix(rng):
    A = rng.standard_normal((20, 5))
    Q = orthonormal_range_basis(A)
    assert Q.shape == (20, 5)
    assert np.linalg.norm(Q @ Q.T @ A - A) <= 1e-10 * np.linalg.norm(A)


def test_basis_drops_dependent_columns(rng):
    B = rng.standard_normal((12, 2))
    A = B @ rng.standard_normal((2, 4))
    Q = orthonormal_range_basis(A)
    assert Q.shape == (12, 2)
    assert np.linalg.norm(Q @ Q.T @ A - A) <= 1e-10 * np.linalg.norm(A)


def test_zero_matrix_has_empty_range():
    with pytest.raises(EmptyRangeError) as excinfo:
        orthonormal_range_basis(np.zeros((3, 2)))
    assert excinfo.value.code == "E_EMPTY_RANGE"


def test_rank_tol_controls_cutoff():
    A = np.diag([1.0, 1e-8, 0.0])
    assert orthonormal_range_basis(A).shape[1] == 2
    assert orthonormal_range_basis(A, rank_tol=1e-6).shape[1] == 1
    assert numerical_rank(A) == 2
    assert numerical_rank(A, rank_tol=1e-6) == 1
    assert numerical_rank(np.zeros((2, 2))) == 0


def test_pinv_matches_inverse_for_square_full_rank(rng):
    A = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    np.testing.assert_allclose(pinv(A) @ A, np.eye(4), atol=1e-12)


def test_pinv_of_orthonormal_rows_is_transpose(rng):
    Q, _ = np.linalg.qr(rng.standard_normal((6, 3)))
    H = Q.T
    np.testing.assert_allclose(pinv(H), H.T, atol=1e-14)


def test_truncated_svd_and_best_rank_approximation():
    U, s, Vt = truncated_svd(np.eye(2), 1)
    assert U.shape == (2, 1) and s.shape == (1,) and Vt.shape == (1, 2)
    assert np.linalg.norm(np.eye(2) - best_rank_approximation(np.eye(2), 1)) == pytest.approx(1.0)


@pytest.mark.parametrize("rank", [0, 3])
def test_truncated_svd_rejects_bad_rank(rank):
    with pytest.raises(InvalidInputError):
        truncated_svd(np.ones((2, 2)), rank)
