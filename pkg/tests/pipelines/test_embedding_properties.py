from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from pipelines.embedding import mad
from pipelines.generators import PointCloud
from rmd.core.matrices import support_from
from rmd.solvers.baseline import tsvd_baseline

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(0.05, 0.95), st.floats(0.0, 2 * np.pi), st.floats(0.1, 10.0))
def test_mad_ignores_rotation_and_scaling(seed, tau, angle, scale):
    rng = np.random.default_rng(seed)
    cloud = PointCloud(points=rng.standard_normal((8, 2)) + 0.5)
    turn = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    moved = PointCloud(points=scale * cloud.points @ turn.T)
    assert mad(cloud, moved, tau) <= 1e-6


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 8), st.integers(2, 8), st.data())
def test_tsvd_relu_error_never_exceeds_raw(seed, m, n, data):
    rng = np.random.default_rng(seed)
    X = support_from(np.maximum(0.0, rng.standard_normal((m, n))))
    r = data.draw(st.integers(1, min(m, n)))
    result = tsvd_baseline(X, r)
    assert result.relu_error <= result.raw_error + 1e-12
