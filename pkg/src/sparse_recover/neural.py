"""A single-layer network of zero-one neurons with weights on the unit circle.

Neuron i has weight (sin t_i, cos t_i) for an angle t_i in [0, pi]. The
population loss against a teacher network with the same architecture is a
kernel discrepancy, and pi times it equals the energy distance between the
two angle sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    samples: int


def _angles(a) -> np.ndarray:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.ndim != 1 or a.size == 0:
        raise ValueError("angles must be a non-empty 1-D list")
    return a


def unit_weights(angles) -> np.ndarray:
    t = _angles(angles)
    return np.column_stack([np.sin(t), np.cos(t)])


def activation(a):
    """Zero-one neuron; zero input counts as inactive."""
    return (np.asarray(a) > 0).astype(float)


def network_output(x, angles) -> np.ndarray | float:
    """Mean activation over neurons. ``x`` may be one 2-vector or an (s, 2) batch."""
    x = np.asarray(x, dtype=float)
    out = activation(x @ unit_weights(angles).T).mean(axis=-1)
    return float(out) if out.ndim == 0 else out


def arccos_kernel(theta: float, omega: float) -> float:
    """1 - |theta - omega| / pi, the closed form for angles in [0, pi]."""
    return 1.0 - abs(float(theta) - float(omega)) / math.pi


def arccos_kernel_dot(theta: float, omega: float) -> float:
    """Same kernel through the dot product of the unit weights; kept as a cross-check."""
    dot = math.sin(theta) * math.sin(omega) + math.cos(theta) * math.cos(omega)
    return 1.0 - math.acos(min(1.0, max(-1.0, dot))) / math.pi


def _gram(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return 1.0 - np.abs(a[:, None] - b[None, :]) / math.pi


def population_loss_analytic(v, w) -> float:
    """(1/n^2) sum_ij [k(v_i, v_j) - 2 k(v_i, w_j) + k(w_i, w_j)]."""
    v, w = _angles(v), _angles(w)
    if v.size != w.size:
        raise ValueError(f"size mismatch {v.size} vs {w.size}")
    n = v.size
    total = _gram(v, v).sum() - 2.0 * _gram(v, w).sum() + _gram(w, w).sum()
    return float(total / n**2)


def population_loss_mc(v, w, samples: int, rng: np.random.Generator, chunk: int = 50_000) -> MonteCarloEstimate:
    """Average squared output gap over inputs (sin r, cos r), r uniform on [0, 2 pi)."""
    v, w = _angles(v), _angles(w)
    if v.size != w.size:
        raise ValueError(f"size mismatch {v.size} vs {w.size}")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    sq = np.empty(samples)
    for start in range(0, samples, chunk):
        r = rng.uniform(0.0, 2 * math.pi, size=min(chunk, samples - start))
        x = np.column_stack([np.sin(r), np.cos(r)])
        sq[start : start + r.size] = (network_output(x, v) - network_output(x, w)) ** 2
    stderr = float(sq.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return MonteCarloEstimate(mean=float(sq.mean()), stderr=stderr, samples=samples)
