"""Seeded generators and synthetic ground truth.

All randomness flows through ``numpy.random.Generator`` backed by Philox, a
counter-based bit generator whose streams are identical across platforms for
a given seed.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalFailure
from .highdim import beta_of
from .measures import SparseMeasure1D

MAX_REJECTIONS = 100_000


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def spikes_1d(n: int, rng: np.random.Generator, ell: float = 0.0) -> SparseMeasure1D:
    """n atoms uniform on [0, pi] with pairwise gaps >= ell (rejection)."""
    for _ in range(MAX_REJECTIONS):
        w = rng.uniform(0.0, np.pi, size=n)
        if n < 2 or np.min(np.diff(np.sort(w))) >= ell:
            return SparseMeasure1D(w)
    raise NumericalFailure(f"no {n} spikes with separation {ell} after {MAX_REJECTIONS} draws")


def pairwise_min_distance(points: np.ndarray) -> float:
    points = np.asarray(points, dtype=float)
    diff = points[:, None, :] - points[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    iu = np.triu_indices(len(points), k=1)
    return float(dist[iu].min()) if len(iu[0]) else np.inf


def sphere_cloud(n: int, d: int, rng: np.random.Generator, ell: float = 0.0) -> np.ndarray:
    """n unit vectors in R^d, uniform on the sphere, pairwise >= ell apart."""
    for _ in range(MAX_REJECTIONS):
        g = rng.standard_normal((n, d))
        pts = g / np.linalg.norm(g, axis=1, keepdims=True)
        if pairwise_min_distance(pts) >= ell:
            return pts
    raise NumericalFailure(f"no {n} sphere points with separation {ell} after {MAX_REJECTIONS} draws")


def box_cloud(n: int, d: int, rng: np.random.Generator, beta: float) -> np.ndarray:
    """n points uniform in [-1, 1]^d whose coordinate/sum separation is >= beta."""
    for _ in range(MAX_REJECTIONS):
        pts = rng.uniform(-1.0, 1.0, size=(n, d))
        if n < 2 or beta_of(pts) >= beta:
            return pts
    raise NumericalFailure(f"no {n}x{d} cloud with beta >= {beta} after {MAX_REJECTIONS} draws")
