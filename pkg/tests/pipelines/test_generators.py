from __future__ import annotations

import numpy as np
import pytest

from pipelines.generators import (
    DEFAULT_CLUSTER_COUNTS,
    PointCloud,
    PointMode,
    TruthKind,
    edm,
    gen_identity,
    gen_points,
    gen_relu_sampling,
    observe_below,
    rng_streams,
)
from rmd.core.errors import DegenerateInputError, InvalidInputError


def test_relu_sampling_noiseless_is_exactly_realizable():
    X, truth = gen_relu_sampling(20, 15, 4, 0.0, seed=3)
    assert truth.kind is TruthKind.RELU_SAMPLING
    assert np.linalg.matrix_rank(truth.theta_true) == 4
    np.testing.assert_array_equal(X.values, np.maximum(0.0, truth.theta_true))


def test_relu_sampling_noise_level():
    X, truth = gen_relu_sampling(30, 30, 3, 0.1, seed=5)
    clean = np.maximum(0.0, truth.theta_true)
    assert not np.array_equal(X.values, clean)
    assert X.dims == (30, 30)


def test_relu_sampling_is_seeded():
    first, _ = gen_relu_sampling(10, 10, 2, 0.05, seed=11)
    second, _ = gen_relu_sampling(10, 10, 2, 0.05, seed=11)
    third, _ = gen_relu_sampling(10, 10, 2, 0.05, seed=12)
    np.testing.assert_array_equal(first.values, second.values)
    assert not np.array_equal(first.values, third.values)


@pytest.mark.parametrize("kwargs", [{"r": 0}, {"r": 11}, {"sigma": -0.1}])
def test_relu_sampling_rejects_bad_parameters(kwargs):
    params = {"m": 10, "n": 10, "r": 2, "sigma": 0.0, "seed": 0, **kwargs}
    with pytest.raises(InvalidInputError):
        gen_relu_sampling(**params)


def test_rng_streams_are_independent_and_reproducible():
    a, b = rng_streams(4, 2)
    assert a.standard_normal() != b.standard_normal()
    again = rng_streams(4, 2)[0]
    assert rng_streams(4, 2)[0].standard_normal() == again.standard_normal()


def test_clustered_points_default_counts():
    cloud = gen_points(PointMode.CLUSTERED, seed=1)
    assert len(cloud) == sum(DEFAULT_CLUSTER_COUNTS)
    assert cloud.d == 3


def test_uniform_points_stay_in_box():
    cloud = gen_points("uniform", counts=50, seed=2, dim=2)
    assert cloud.points.shape == (50, 2)
    assert np.all((cloud.points >= 0.0) & (cloud.points <= 10.0))


def test_points_reject_bad_counts():
    with pytest.raises(InvalidInputError):
        gen_points("uniform", counts=0)
    with pytest.raises(InvalidInputError):
        gen_points("clustered", counts=[10, 0])
    with pytest.raises(ValueError):
        gen_points("spiral")


def test_identity_generator():
    X = gen_identity(16)
    assert X.nnz == 16
    with pytest.raises(InvalidInputError):
        gen_identity(0)


def test_edm_is_symmetric_with_zero_diagonal():
    cloud = PointCloud(points=np.array([[0.0, 0.0], [3.0, 4.0], [1.0, 0.0]]))
    D = edm(cloud)
    np.testing.assert_allclose(D, D.T)
    np.testing.assert_array_equal(np.diag(D), 0.0)
    assert D[0, 1] == pytest.approx(25.0)
    assert D[1, 2] == pytest.approx(20.0)


def test_edm_rank_is_at_most_dim_plus_two():
    cloud = gen_points("uniform", counts=40, seed=4)
    assert np.linalg.matrix_rank(edm(cloud)) <= cloud.d + 2


def test_observe_below_hits_fraction():
    theta = np.arange(1.0, 101.0).reshape(10, 10)
    X, d = observe_below(theta, 0.3)
    assert d == pytest.approx(30.5)
    assert X.nnz == 30
    np.testing.assert_allclose(X.values[X.mask], (d - theta)[X.mask])


def test_observe_below_full_fraction_observes_everything():
    theta = np.arange(1.0, 10.0).reshape(3, 3)
    X, d = observe_below(theta, 1.0)
    assert X.nnz == 9
    assert d > theta.max()


@pytest.mark.parametrize("frac", [0.0, -0.1, 1.5])
def test_observe_below_rejects_fraction(frac):
    with pytest.raises(InvalidInputError):
        observe_below(np.ones((3, 3)), frac)


def test_observe_below_rejects_non_positive_threshold():
    with pytest.raises(DegenerateInputError):
        observe_below(-np.arange(1.0, 10.0).reshape(3, 3), 0.5)
