"""Super-resolution on [0, pi] from Fourier moments by approximate particle descent.

Each particle takes normalized steps of size gamma, so between clampings it
lives on the lattice ``anchor + offset * gamma``. Positions are tracked as
(anchor, integer offset) pairs: revisiting a point reproduces it bit for bit,
the moment term is tabulated once per anchor, and because the joint state
space is finite the run is eventually periodic. Once a state repeats, the
iterate at step k is read off the cycle, which is exactly what running all k
steps would produce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .energy import Trajectory
from .errors import NumericalFailure
from .fourier import LatticeEvaluator, MomentVector, approx_cross_subgradient, sign_series_coeffs
from .measures import SparseMeasure1D, as_measure, min_separation, winf_distance

ZERO_DIRECTION = 1e-12
MAX_INIT_ATTEMPTS = 100
MAX_SNAPSHOTS = 500


@dataclass(frozen=True)
class RecoveryConfig:
    gamma: float
    m: int
    k: int
    ell: Optional[float] = None
    eps: Optional[float] = None
    mode: str = "theory"

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.m < 1 or self.k < 0:
            raise ValueError("need m >= 1 and k >= 0")
        if self.mode not in ("theory", "empirical"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class RecoveryResult:
    final: SparseMeasure1D
    trajectory: Trajectory
    config: RecoveryConfig
    matched_error: Optional[float] = None
    cycle_start: Optional[int] = None
    cycle_period: Optional[int] = None


def iterations_for(gamma: float) -> int:
    # rounding strips representation noise, e.g. 0.15 / 3 < 0.05
    return math.floor(round(200 * math.pi / gamma, 6)) + 1


def moments_for(n: int, gamma: float, factor: float = 800.0) -> int:
    return math.ceil(round(factor * n / gamma, 6))


def default_params(n: int, ell: float, eps: float) -> RecoveryConfig:
    """Theory schedule: gamma = min(eps/3, ell), m = ceil(800 n / gamma), k = floor(200 pi / gamma) + 1."""
    if n < 1 or not ell > 0 or not eps > 0:
        raise ValueError("need n >= 1, ell > 0, eps > 0")
    gamma = min(eps / 3.0, ell)
    return RecoveryConfig(gamma=gamma, m=moments_for(n, gamma), k=iterations_for(gamma), ell=ell, eps=eps)


def empirical_params(gamma: float, m: int, k: Optional[int] = None) -> RecoveryConfig:
    """User-chosen schedule with no recovery guarantee attached."""
    return RecoveryConfig(gamma=gamma, m=m, k=iterations_for(gamma) if k is None else k, mode="empirical")


def init_particles(n: int, rng: np.random.Generator) -> SparseMeasure1D:
    """n pairwise distinct points drawn uniformly from [0, pi]."""
    if n < 1:
        raise ValueError("n must be at least 1")
    for _ in range(MAX_INIT_ATTEMPTS):
        pts = rng.uniform(0.0, np.pi, size=n)
        if n == 1 or np.all(np.diff(np.sort(pts)) > 0):
            return SparseMeasure1D(pts)
    raise NumericalFailure(f"could not draw {n} distinct particles in {MAX_INIT_ATTEMPTS} attempts")


def approx_gd_step(v, phimu: MomentVector, coeffs: np.ndarray, gamma: float) -> np.ndarray:
    """One synchronous step with pointwise moment evaluation, clamped to [0, pi].

    Reference path: ``recover_1d`` with k = 1 must agree with it.
    """
    v = np.asarray(v, dtype=float)
    own = np.sign(v[:, None] - v[None, :]).sum(axis=1)
    d = np.array([approx_cross_subgradient(x, phimu, coeffs) for x in v]) - own
    s = np.where(np.abs(d) < ZERO_DIRECTION, 0.0, np.sign(d))
    return np.clip(v - gamma * s, 0.0, np.pi)


class _LatticeTables:
    """Moment cross term on anchor + j * gamma, built lazily per anchor."""

    def __init__(self, phimu: MomentVector, coeffs: np.ndarray, gamma: float):
        self.gamma = gamma
        self.half = math.ceil(np.pi / gamma) + 2
        self.evaluate = LatticeEvaluator(phimu, coeffs, gamma, 2 * self.half + 1)
        self.anchors: list[float] = []
        self.index: dict[float, int] = {}
        self.tables: list[np.ndarray] = []

    def anchor_id(self, a: float) -> int:
        a = float(a)
        if a not in self.index:
            self.index[a] = len(self.anchors)
            self.anchors.append(a)
            start = a - self.half * self.gamma
            self.tables.append(self.evaluate(start))
        return self.index[a]

    def lookup(self, ids: np.ndarray, offsets: np.ndarray) -> np.ndarray:
        return np.array([self.tables[a][o + self.half] for a, o in zip(ids, offsets)])


def recover_1d(
    phimu: MomentVector,
    init,
    config: RecoveryConfig,
    truth=None,
    stride: Optional[int] = None,
) -> RecoveryResult:
    """Approximate particle descent driven only by the moment vector.

    Per particle the direction is the moment estimate of sum_j sign(v_i - w_j)
    minus the exact sum_j sign(v_i - v_j); the particle steps gamma against
    it and is clamped to [0, pi]. Exactly ``config.k`` synchronous steps.
    """
    init = as_measure(init)
    n, gamma = init.n, config.gamma
    if len(phimu) != config.m:
        raise ValueError(f"moment length {len(phimu)} != config.m={config.m}")
    if phimu.n != n:
        raise ValueError(f"moments summarize {phimu.n} atoms, init has {n}")
    if np.any(init.support < 0) or np.any(init.support > np.pi):
        raise ValueError("initial particles must lie in [0, pi]")
    if n > 1 and min_separation(init) <= 0:
        raise ValueError("initial particles must be pairwise distinct")
    truth = None if truth is None else as_measure(truth)

    tables = _LatticeTables(phimu, sign_series_coeffs(config.m), gamma)
    ids = np.array([tables.anchor_id(a) for a in init.support], dtype=np.int64)
    offsets = np.zeros(n, dtype=np.int64)

    def positions(ids, offsets):
        return np.array(tables.anchors)[ids] + offsets * gamma

    history = [(ids, offsets)]
    seen = {(ids.tobytes(), offsets.tobytes()): 0}
    cycle_start = cycle_period = None
    for q in range(config.k):
        pos = positions(ids, offsets)
        own = np.sign(pos[:, None] - pos[None, :]).sum(axis=1)
        d = tables.lookup(ids, offsets) - own
        s = np.where(np.abs(d) < ZERO_DIRECTION, 0, np.sign(d)).astype(np.int64)
        ids, offsets = ids.copy(), offsets - s
        new = positions(ids, offsets)
        for i in np.flatnonzero((new < 0.0) | (new > np.pi)):
            ids[i] = tables.anchor_id(0.0 if new[i] < 0.0 else np.pi)
            offsets[i] = 0
        key = (ids.tobytes(), offsets.tobytes())
        if key in seen:
            cycle_start, cycle_period = seen[key], q + 1 - seen[key]
            break
        seen[key] = q + 1
        history.append((ids, offsets))

    def state_at(t):
        if cycle_start is None or t < len(history):
            return history[t]
        return history[cycle_start + (t - cycle_start) % cycle_period]

    if stride is None:
        stride = max(1, math.ceil(config.k / MAX_SNAPSHOTS))
    traj = Trajectory(gamma=gamma, iterations=config.k)
    for t in sorted(set(range(0, config.k, stride)) | {config.k}):
        pos = positions(*state_at(t))
        traj.record(t, pos, winf_distance(pos, truth) if truth is not None else math.nan)

    final = SparseMeasure1D(positions(*state_at(config.k)))
    return RecoveryResult(
        final=final,
        trajectory=traj,
        config=config,
        matched_error=None if truth is None else winf_distance(final, truth),
        cycle_start=cycle_start,
        cycle_period=cycle_period,
    )
