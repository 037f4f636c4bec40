"""Uniform empirical measures on the line and the W-infinity transport distance.

On the real line the optimal W-infinity matching between two uniform measures
with the same number of atoms pairs the atoms by rank, so every distance here
reduces to a stable sort.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

BRUTEFORCE_MAX_N = 8


@dataclass(frozen=True)
class SparseMeasure1D:
    """Uniform measure (1/n) sum_i delta_{support[i]}.

    The support is stored in the caller's order; transport routines sort
    internally and hand back the permutation so particle identity survives.
    """

    support: np.ndarray

    def __post_init__(self):
        s = np.array(self.support, dtype=float).reshape(-1)
        if s.size < 1:
            raise ValueError("a measure needs at least one support point")
        if not np.all(np.isfinite(s)):
            raise ValueError("support values must be finite")
        s.flags.writeable = False
        object.__setattr__(self, "support", s)

    @property
    def n(self) -> int:
        return int(self.support.size)

    def __len__(self) -> int:
        return self.n

    def is_distinct(self) -> bool:
        return self.n < 2 or min_separation(self) > 0.0


@dataclass(frozen=True)
class MatchResult:
    """Rank pairing between two measures.

    ``permutation[i]`` is the index of the atom of ``a`` matched to ``b[i]``.
    """

    permutation: np.ndarray
    max_deviation: float


def as_measure(x) -> SparseMeasure1D:
    return x if isinstance(x, SparseMeasure1D) else SparseMeasure1D(x)


def _pair(a, b):
    a, b = as_measure(a), as_measure(b)
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n} atoms")
    return a, b


def match_particles(a, b) -> MatchResult:
    a, b = _pair(a, b)
    ia = np.argsort(a.support, kind="stable")
    ib = np.argsort(b.support, kind="stable")
    perm = np.empty(a.n, dtype=np.intp)
    perm[ib] = ia
    dev = float(np.max(np.abs(a.support[perm] - b.support)))
    perm.flags.writeable = False
    return MatchResult(permutation=perm, max_deviation=dev)


def winf_distance(a, b) -> float:
    """min over permutations sigma of max_i |a_sigma(i) - b_i|."""
    a, b = _pair(a, b)
    return float(np.max(np.abs(np.sort(a.support) - np.sort(b.support))))


def winf_bruteforce(a, b) -> float:
    """Enumerate all n! matchings. Testing oracle for ``winf_distance``."""
    a, b = _pair(a, b)
    if a.n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force refused for n={a.n} > {BRUTEFORCE_MAX_N}")
    best = np.inf
    for perm in itertools.permutations(range(a.n)):
        best = min(best, float(np.max(np.abs(a.support[list(perm)] - b.support))))
    return best


def min_separation(a) -> float:
    """Smallest gap between two atoms; 0.0 when the support has duplicates."""
    a = as_measure(a)
    if a.n < 2:
        raise ValueError("min_separation needs at least two atoms")
    return float(np.min(np.diff(np.sort(a.support))))
