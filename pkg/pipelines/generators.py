"""Synthetic problem generators.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence``; a given seed reproduces the same problem on every build.
Generators also accept an existing ``numpy.random.Generator`` so callers can
hand out independent streams from ``rng_streams``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial.distance import pdist, squareform

from rmd.core.errors import DegenerateInputError, InvalidInputError
from rmd.core.matrices import FloatMatrix, ObservedMatrix, support_from

logger = logging.getLogger("pipelines.generators")

UNIFORM_BOX = (0.0, 10.0)
CENTROID_BOX = (-10.0, 10.0)
CLUSTER_STD = 3.0
DEFAULT_CLUSTER_COUNTS = (30, 30, 30, 30, 40, 40)
DEFAULT_UNIFORM_COUNT = 200

Seed = int | np.random.Generator


class TruthKind(str, Enum):
    RELU_SAMPLING = "relu_sampling"
    EDM = "edm"


class PointMode(str, Enum):
    UNIFORM = "uniform"
    CLUSTERED = "clustered"


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """The matrix an experiment tries to recover."""

    theta_true: FloatMatrix
    kind: TruthKind

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.theta_true)):
            raise InvalidInputError("Ground truth contains non-finite entries.")


@dataclass(frozen=True, eq=False)
class PointCloud:
    """n points in R^d stored row-wise as an (n, d) array."""

    points: FloatMatrix

    def __post_init__(self) -> None:
        if self.points.ndim != 2:
            raise InvalidInputError("Point cloud must be an (n, d) array.")
        if not np.all(np.isfinite(self.points)):
            raise InvalidInputError("Point cloud contains non-finite coordinates.")

    @property
    def d(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def gram(self) -> FloatMatrix:
        return self.points @ self.points.T


def rng_streams(seed: int, k: int) -> list[np.random.Generator]:
    """k independent PCG64 generators spawned from one seed."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(k)]


def gen_relu_sampling(
    m: int, n: int, r: int, sigma: float, seed: Seed
) -> tuple[ObservedMatrix, GroundTruth]:
    """Gaussian rank-r Theta = W H observed through X = max(0, Theta + N).

    The noise is rescaled so that ||N||_F = sigma ||Theta||_F.
    """
    if not 1 <= r <= min(m, n):
        raise InvalidInputError(f"Rank {r} must lie in [1, {min(m, n)}].")
    if sigma < 0 or not math.isfinite(sigma):
        raise InvalidInputError(f"Noise level must be finite and >= 0, got {sigma}.")
    rng = np.random.default_rng(seed)
    W = rng.standard_normal((m, r))
    H = rng.standard_normal((r, n))
    theta = W @ H
    noisy = theta
    if sigma > 0:
        noise = rng.standard_normal((m, n))
        noisy = theta + noise * (sigma * np.linalg.norm(theta, "fro") / np.linalg.norm(noise, "fro"))
    X = support_from(np.maximum(0.0, noisy))
    logger.debug("Generated ReLU sample %dx%d r=%d sigma=%g density=%.3f", m, n, r, sigma, X.density)
    return X, GroundTruth(theta_true=theta, kind=TruthKind.RELU_SAMPLING)


def gen_points(
    mode: PointMode | str,
    counts: int | Sequence[int] | None = None,
    seed: Seed = 0,
    *,
    dim: int = 3,
) -> PointCloud:
    """Uniform points in [0, 10]^dim, or Gaussian clusters (std 3) around centroids in [-10, 10]^dim."""
    mode = PointMode(mode)
    rng = np.random.default_rng(seed)
    if mode is PointMode.UNIFORM:
        total = DEFAULT_UNIFORM_COUNT if counts is None else counts
        if not isinstance(total, int) or total < 1:
            raise InvalidInputError(f"Uniform mode needs a positive point count, got {counts!r}.")
        return PointCloud(points=rng.uniform(*UNIFORM_BOX, size=(total, dim)))
    sizes = DEFAULT_CLUSTER_COUNTS if counts is None else counts
    if isinstance(sizes, int):
        sizes = (sizes,)
    sizes = tuple(int(size) for size in sizes)
    if not sizes or any(size < 1 for size in sizes):
        raise InvalidInputError(f"Cluster sizes must be positive, got {counts!r}.")
    centroids = rng.uniform(*CENTROID_BOX, size=(len(sizes), dim))
    blocks = [
        centroid + CLUSTER_STD * rng.standard_normal((size, dim))
        for centroid, size in zip(centroids, sizes, strict=True)
    ]
    return PointCloud(points=np.vstack(blocks))


def gen_identity(n: int) -> ObservedMatrix:
    """The n x n identity, exactly representable by a rank-3 ReLU decomposition."""
    if n < 1:
        raise InvalidInputError(f"Identity size must be positive, got {n}.")
    return support_from(np.eye(n))


def edm(points: PointCloud) -> FloatMatrix:
    """Squared Euclidean distance matrix, computed pairwise."""
    if len(points) == 0:
        raise InvalidInputError("Cannot build a distance matrix from an empty cloud.")
    return squareform(pdist(points.points, "sqeuclidean"))


def observe_below(theta: FloatMatrix, frac: float) -> tuple[ObservedMatrix, float]:
    """Threshold Theta so that about ``frac`` of its entries fall strictly below d.

    d is the midpoint between the k-th and (k+1)-th smallest entries with
    k = round(frac * m * n). For frac = 1 it is placed just above the maximum.
    Entries equal to d stay unobserved.
    """
    if not 0 < frac <= 1:
        raise InvalidInputError(f"Observed fraction must lie in (0, 1], got {frac}.")
    theta = np.asarray(theta, dtype=np.float64)
    values = np.sort(theta, axis=None)
    total = values.size
    if total == 0:
        raise InvalidInputError("Cannot threshold an empty matrix.")
    k = max(1, int(math.floor(frac * total + 0.5)))
    if k >= total:
        spread = values[-1] - values[0]
        d = values[-1] + (spread / total if spread > 0 else 1.0)
    else:
        d = 0.5 * (values[k - 1] + values[k])
    if not d > 0:
        raise DegenerateInputError(f"Threshold d={d} is not positive; raise the observed fraction.")
    X = support_from(np.maximum(0.0, d - theta))
    logger.debug("Threshold d=%.6g observes %d of %d entries", d, X.nnz, total)
    return X, float(d)
