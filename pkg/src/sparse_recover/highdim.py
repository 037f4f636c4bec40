"""Sparse measures in R^d recovered from 2d one-dimensional instances.

Coordinates and first-coordinate sums are recovered separately on the line,
then glued back into points using the sums as witnesses. A Gaussian random
rotation first spreads generic unit-sphere points so that the coordinate and
sum separations hold.

Every scalar instance is moved into [0, pi] by one fixed affine map,
t -> (t + 2) pi / 5, which sends [-2, 2] (the range of a sum of two
coordinates in [-1, 1]) into [0, 4 pi / 5]. Separations and accuracies are
scaled by pi / 5 on the way in.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import AssumptionViolation, NumericalFailure
from .fourier import moments
from .measures import SparseMeasure1D
from .superres import RecoveryConfig, RecoveryResult, init_particles, iterations_for, moments_for, recover_1d

PIVOT_TOL = 1e-12
POWER_TOL = 1e-10
POWER_MAX_ITERS = 10_000
MAX_PROJECTION_ATTEMPTS = 5
UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class AffineMap:
    scale: float
    shift: float

    def apply(self, t):
        return self.scale * np.asarray(t, dtype=float) + self.shift

    def invert(self, y):
        return (np.asarray(y, dtype=float) - self.shift) / self.scale


SUM_DOMAIN = AffineMap(scale=np.pi / 5, shift=2 * np.pi / 5)
SUM_DOMAIN_RANGE = (-2.0, 2.0)


@dataclass(frozen=True)
class GaussianProjection:
    Z: np.ndarray
    spectral_norm: float
    inverse: np.ndarray

    def project(self, points: np.ndarray) -> np.ndarray:
        """w -> Z w / ||Z|| applied row-wise."""
        return np.asarray(points, dtype=float) @ self.Z.T / self.spectral_norm

    def unproject(self, points: np.ndarray) -> np.ndarray:
        """v -> ||Z|| Z^{-1} v applied row-wise."""
        return self.spectral_norm * np.asarray(points, dtype=float) @ self.inverse.T


@dataclass
class GlueResult:
    points: np.ndarray
    matches: dict = field(default_factory=dict)


@dataclass
class HighDimResult:
    points: np.ndarray
    config: RecoveryConfig
    beta: float
    eps: float
    matches: dict
    coordinate_runs: list[RecoveryResult]
    sum_runs: list[RecoveryResult]


@dataclass
class RandomizedResult:
    points: np.ndarray
    projection: GaussianProjection
    beta: float
    inner: HighDimResult


def _check_cloud(points, min_n=1, min_d=1) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("a point cloud is an (n, d) array")
    n, d = pts.shape
    if n < min_n or d < min_d:
        raise ValueError(f"need n >= {min_n} and d >= {min_d}, got n={n}, d={d}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("coordinates must be finite")
    return pts


def _min_gap(values: np.ndarray) -> float:
    return float(np.min(np.diff(np.sort(values))))


def beta_of(points) -> float:
    """Smallest gap among same-coordinate values and among first-coordinate sums.

    Zero means the coordinate/sum separation fails outright.
    """
    pts = _check_cloud(points, min_n=2, min_d=2)
    gaps = [_min_gap(pts[:, q]) for q in range(pts.shape[1])]
    gaps += [_min_gap(pts[:, 0] + pts[:, r]) for r in range(1, pts.shape[1])]
    return min(gaps)


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value by power iteration on a^T a."""
    a = np.asarray(a, dtype=float)
    gram = a.T @ a
    x = np.ones(gram.shape[0]) / math.sqrt(gram.shape[0])
    lam = 0.0
    for _ in range(POWER_MAX_ITERS):
        y = gram @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0
        lam = float(x @ y)
        x = y / norm
        if np.linalg.norm(gram @ x - lam * x) <= POWER_TOL * max(lam, 1.0):
            break
    return math.sqrt(float(x @ gram @ x))


def invert(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan elimination with partial pivoting."""
    a = np.array(a, dtype=float)
    d = a.shape[0]
    aug = np.hstack([a, np.eye(d)])
    for col in range(d):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[piv, col]) < PIVOT_TOL:
            raise NumericalFailure(f"pivot {aug[piv, col]:.3e} below {PIVOT_TOL} in column {col}")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] /= aug[col, col]
        for row in range(d):
            if row != col:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, d:]


def random_projection(d: int, rng: np.random.Generator) -> GaussianProjection:
    if d < 1:
        raise ValueError("d must be at least 1")
    for _ in range(MAX_PROJECTION_ATTEMPTS):
        z = rng.standard_normal((d, d))
        try:
            inv = invert(z)
        except NumericalFailure:
            continue
        return GaussianProjection(Z=z, spectral_norm=spectral_norm(z), inverse=inv)
    raise NumericalFailure(f"Gaussian matrix singular on {MAX_PROJECTION_ATTEMPTS} draws")


def glue(coords, sums, beta: float) -> GlueResult:
    """Reassemble points from per-coordinate and per-sum recoveries.

    ``coords[q][j]`` is atom j of the recovered coordinate-q list and
    ``sums[q][r]`` atom r of the recovered list of coordinate q plus
    coordinate 0. For each point i and coordinate q >= 1 exactly one (j, r)
    must satisfy |coords[0][i] + coords[q][j] - sums[q][r]| < beta / 5.
    """
    coords = np.asarray(coords, dtype=float)
    sums = np.asarray(sums, dtype=float)
    if coords.shape != sums.shape:
        raise ValueError(f"coords {coords.shape} and sums {sums.shape} differ in shape")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    d, n = coords.shape
    out = np.empty((n, d))
    out[:, 0] = coords[0]
    matches = {}
    for q in range(1, d):
        resid = np.abs(coords[0][:, None, None] + coords[q][None, :, None] - sums[q][None, None, :])
        for i in range(n):
            hits = np.argwhere(resid[i] < beta / 5)
            if len(hits) != 1:
                kind = "no" if len(hits) == 0 else f"{len(hits)}"
                raise AssumptionViolation(
                    f"gluing found {kind} candidates for point {i}, coordinate {q} (threshold {beta / 5:.4g})"
                )
            j, r = (int(x) for x in hits[0])
            out[i, q] = coords[q][j]
            matches[(i, q)] = (j, r)
    return GlueResult(points=out, matches=matches)


def scalar_config(n: int, beta: float, eps: float, moment_factor: float = 800.0) -> RecoveryConfig:
    """Shared schedule for every scalar instance, in mapped units.

    gamma = min(eps'/2, beta'/10) with primes denoting the pi/5 scaling.
    """
    beta_s, eps_s = beta * SUM_DOMAIN.scale, eps * SUM_DOMAIN.scale
    gamma = min(eps_s / 2, beta_s / 10)
    return RecoveryConfig(
        gamma=gamma,
        m=moments_for(n, gamma, moment_factor),
        k=iterations_for(gamma),
        ell=beta_s,
        eps=eps_s,
        mode="theory" if moment_factor >= 800 else "empirical",
    )


def _scalar_run(values: np.ndarray, config: RecoveryConfig, rng: np.random.Generator) -> RecoveryResult:
    target = SparseMeasure1D(SUM_DOMAIN.apply(values))
    init = init_particles(target.n, rng)
    return recover_1d(moments(target, config.m), init, config, truth=target)


def recover_nd_deterministic(
    truth,
    beta: float,
    eps: float,
    rng: np.random.Generator,
    moment_factor: float = 800.0,
    threads: int = 1,
) -> HighDimResult:
    """Coordinate-wise recovery plus gluing for points in [-1, 1]^d.

    ``truth`` only feeds the moment vectors (and per-run diagnostics); the
    recovery never reads the points directly.
    """
    pts = _check_cloud(truth, min_n=1, min_d=1)
    n, d = pts.shape
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if np.any(np.abs(pts) > SUM_DOMAIN_RANGE[1] / 2):
        raise ValueError("coordinates must lie in [-1, 1] so sums fit the recovery interval")
    if n >= 2 and d >= 2:
        actual = beta_of(pts)
        if actual < beta:
            raise AssumptionViolation(f"points are only {actual:.4g}-separated, below beta={beta:.4g}")

    config = scalar_config(n, beta, eps, moment_factor)
    instances = [pts[:, q] for q in range(d)] + [pts[:, q] + pts[:, 0] for q in range(d)]
    rngs = rng.spawn(len(instances))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        runs = list(pool.map(lambda args: _scalar_run(args[0], config, args[1]), zip(instances, rngs)))

    coords = np.array([SUM_DOMAIN.invert(r.final.support) for r in runs[:d]])
    sums = np.array([SUM_DOMAIN.invert(r.final.support) for r in runs[d:]])
    if n == 1:
        glued = GlueResult(points=coords.T.copy(), matches={})
    else:
        glued = glue(coords, sums, beta)
    return HighDimResult(
        points=glued.points,
        config=config,
        beta=beta,
        eps=eps,
        matches=glued.matches,
        coordinate_runs=runs[:d],
        sum_runs=runs[d:],
    )


def formula_beta(ell: float, kappa: float, d: int, n: int, c: float = 1 / 8) -> float:
    """c * ell * kappa / (d n (-ln kappa)): the high-probability separation after projection."""
    return c * ell * kappa / (d * n * -math.log(kappa))


def recover_nd_randomized(
    truth,
    ell: float,
    kappa: float,
    eps: float,
    rng: np.random.Generator,
    beta_mode: str = "exact",
    c: float = 1 / 8,
    moment_factor: float = 800.0,
    threads: int = 1,
) -> RandomizedResult:
    """Random Gaussian rotation, deterministic recovery at accuracy eps/d, rotate back.

    ``beta_mode="exact"`` measures the separation of the rotated cloud (needs
    the truth, as in simulation); ``"formula"`` uses ``formula_beta``.
    """
    pts = _check_cloud(truth, min_n=1, min_d=1)
    n, d = pts.shape
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    if not ell > 0 or not eps > 0:
        raise ValueError("ell and eps must be positive")
    if np.any(np.abs(np.linalg.norm(pts, axis=1) - 1.0) > UNIT_NORM_TOL):
        raise ValueError("points must lie on the unit sphere")
    if n >= 2:
        gaps = np.linalg.norm(pts[:, None] - pts[None, :], axis=-1)[np.triu_indices(n, 1)]
        if gaps.min() < ell:
            raise AssumptionViolation(f"points are {gaps.min():.4g} apart, below ell={ell:.4g}")

    proj = random_projection(d, rng)
    rotated = proj.project(pts)
    if beta_mode == "exact":
        beta = beta_of(rotated) if n >= 2 and d >= 2 else math.inf
    elif beta_mode == "formula":
        beta = formula_beta(ell, kappa, d, n, c)
    else:
        raise ValueError(f"unknown beta_mode {beta_mode!r}")
    if beta == 0.0:
        raise AssumptionViolation("rotated cloud has coinciding coordinates")

    inner = recover_nd_deterministic(rotated, beta, eps / d, rng, moment_factor=moment_factor, threads=threads)
    return RandomizedResult(points=proj.unproject(inner.points), projection=proj, beta=beta, inner=inner)


def matched_error(points, truth, norm: float = np.inf) -> float:
    """min over permutations of max_i ||points_i - truth_sigma(i)|| (bottleneck matching)."""
    a = _check_cloud(points)
    b = _check_cloud(truth)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    cost = np.linalg.norm(a[:, None, :] - b[None, :, :], ord=norm, axis=-1)
    n = len(a)
    if n <= 7:
        return min(max(cost[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n)))
    levels = np.unique(cost)
    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        match = maximum_bipartite_matching(csr_matrix(cost <= levels[mid]), perm_type="column")
        if np.all(match >= 0):
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])
