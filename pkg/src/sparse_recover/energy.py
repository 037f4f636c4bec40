"""Energy distance between uniform measures on the line and particle subgradient descent."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .measures import SparseMeasure1D, _pair, min_separation, winf_distance


@dataclass(frozen=True)
class Snapshot:
    iteration: int
    positions: np.ndarray
    winf: float


@dataclass
class Trajectory:
    gamma: float
    iterations: int = 0
    snapshots: list[Snapshot] = field(default_factory=list)

    def record(self, iteration: int, positions, winf: float) -> None:
        if self.snapshots and iteration <= self.snapshots[-1].iteration:
            raise ValueError("snapshot iterations must be strictly increasing")
        pos = np.array(positions, dtype=float)
        if self.snapshots and pos.size != self.snapshots[0].positions.size:
            raise ValueError("every snapshot must hold the same number of particles")
        pos.flags.writeable = False
        self.snapshots.append(Snapshot(int(iteration), pos, float(winf)))

    @property
    def final_winf(self) -> float:
        return self.snapshots[-1].winf


def energy_distance(nu, mu) -> float:
    """E(nu, mu) = 2 E|V - W| - E|V - V'| - E|W - W'| for uniform atoms.

    Evaluated through the identity E = 2 * integral (F_nu - F_mu)^2, which
    keeps the result nonnegative in floating point and exactly zero for equal
    multisets. Depends only on the sorted supports.
    """
    nu, mu = _pair(nu, mu)
    n = nu.n
    x = np.concatenate([nu.support, mu.support])
    jumps = np.concatenate([np.ones(n, dtype=np.int64), -np.ones(n, dtype=np.int64)])
    order = np.argsort(x, kind="stable")
    x, jumps = x[order], jumps[order]
    diff = np.cumsum(jumps)[:-1]
    return float(2.0 * np.sum(diff.astype(float) ** 2 * np.diff(x)) / n**2)


def energy_distance_direct(nu, mu) -> float:
    """The three double sums, evaluated literally. O(n^2); used as an oracle."""
    nu, mu = _pair(nu, mu)
    v, w = nu.support, mu.support
    cross = np.abs(v[:, None] - w[None, :]).sum()
    self_v = np.abs(v[:, None] - v[None, :]).sum()
    self_w = np.abs(w[:, None] - w[None, :]).sum()
    return float((2.0 * cross - self_v - self_w) / nu.n**2)


def direction_counts(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Integer numerators sum_j sign(v_i - w_j) - sum_j sign(v_i - v_j).

    sign(0) = 0, which also drops the j = i self term. The subgradient is
    (2 / n^2) times this.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    cross = np.sign(v[:, None] - w[None, :]).astype(np.int64).sum(axis=1)
    own = np.sign(v[:, None] - v[None, :]).astype(np.int64).sum(axis=1)
    return cross - own


def subgradient(nu, mu, i: int) -> float:
    """dE/dv_i at the configuration nu, target mu."""
    nu, mu = _pair(nu, mu)
    if not 0 <= i < nu.n:
        raise IndexError(f"particle index {i} out of range for n={nu.n}")
    cross = np.sign(nu.support[i] - mu.support).astype(np.int64).sum()
    own = np.sign(nu.support[i] - nu.support).astype(np.int64).sum()
    return float(2.0 * (cross - own) / nu.n**2)


def gd_step(nu, mu, gamma: float) -> SparseMeasure1D:
    """One synchronous normalized step v_i <- v_i - gamma * sign(dE/dv_i).

    Particles whose integer numerator is exactly zero stay put.
    """
    nu, mu = _pair(nu, mu)
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    step = np.sign(direction_counts(nu.support, mu.support)).astype(float)
    return SparseMeasure1D(nu.support - gamma * step)


def iteration_bound(init, mu, gamma: float) -> int:
    """floor(W(init, mu) / gamma) + 1, the step count after which W <= gamma."""
    return int(np.floor(winf_distance(init, mu) / gamma)) + 1


def particle_gd(init, mu, gamma: float, max_iters: int) -> Trajectory:
    """Run ``gd_step`` until W(nu, mu) <= gamma or ``max_iters`` steps.

    Every iterate is recorded, including the initial one.
    """
    init, mu = _pair(init, mu)
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if max_iters < 0:
        raise ValueError("max_iters must be nonnegative")
    if init.n > 1 and min_separation(init) <= 0.0:
        raise ValueError("particle_gd needs pairwise distinct initial particles")

    traj = Trajectory(gamma=float(gamma))
    nu = init
    dist = winf_distance(nu, mu)
    traj.record(0, nu.support, dist)
    k = 0
    while dist > gamma and k < max_iters:
        nu = gd_step(nu, mu, gamma)
        k += 1
        dist = winf_distance(nu, mu)
        traj.record(k, nu.support, dist)
    traj.iterations = k
    return traj

