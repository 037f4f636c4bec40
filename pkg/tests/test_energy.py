import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sparse_recover.energy import (
    Trajectory,
    direction_counts,
    energy_distance,
    energy_distance_direct,
    gd_step,
    iteration_bound,
    particle_gd,
    subgradient,
)
from sparse_recover.measures import match_particles, winf_distance
from sparse_recover.synthetic import make_rng

from conftest import distinct

angles = st.floats(0, np.pi, allow_nan=False)


def pairs(min_n=1, max_n=8):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.tuples(st.lists(angles, min_size=n, max_size=n), st.lists(angles, min_size=n, max_size=n))
    )


def test_energy_examples():
    assert energy_distance([0, 1], [0, 1]) == 0.0
    assert energy_distance([0], [1]) == pytest.approx(2.0)
    # cross 2 * 4/4, self-nu 2 * 2/4, self-mu 2 * 1/4
    assert energy_distance([0, 2], [0, 1]) == pytest.approx(0.5)


def test_energy_size_mismatch():
    with pytest.raises(ValueError):
        energy_distance([0.0], [0.0, 1.0])


@given(pairs())
def test_energy_forms_agree(pair):
    v, w = pair
    assert energy_distance(v, w) == pytest.approx(energy_distance_direct(v, w), abs=1e-12)


@given(pairs(), st.randoms())
def test_energy_permutation_invariant(pair, r):
    v, w = pair
    v2, w2 = list(v), list(w)
    r.shuffle(v2)
    r.shuffle(w2)
    assert energy_distance(v2, w2) == energy_distance(v, w)


def test_energy_nonnegative_and_zero_only_on_equal_multisets(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        v = rng.uniform(0, np.pi, n)
        w = rng.permutation(v) if rng.random() < 0.1 else rng.uniform(0, np.pi, n)
        e = energy_distance(v, w)
        assert e >= 0.0
        assert (e == 0.0) == (sorted(v) == sorted(w))


def test_subgradient_examples():
    assert subgradient([0.5, 0.6], [0.2, 0.8], 0) == pytest.approx(0.5)
    assert subgradient([0.0], [1.0], 0) == pytest.approx(-2.0)
    for i in range(3):
        assert subgradient([0.1, 0.2, 0.3], [0.3, 0.1, 0.2], i) == 0.0


def test_subgradient_index_checked():
    with pytest.raises(IndexError):
        subgradient([0.0], [1.0], 1)


def test_direction_counts_are_integers():
    counts = direction_counts(np.array([0.5, 0.6]), np.array([0.2, 0.8]))
    assert counts.dtype == np.int64
    assert list(counts) == [1, -1]


def test_gd_step_examples():
    assert gd_step([0.0], [1.0], 0.1).support == pytest.approx([0.1])
    assert list(gd_step([0.3, 0.7], [0.3, 0.7], 0.1).support) == [0.3, 0.7]
    assert gd_step([0.5, 0.6], [0.2, 0.8], 0.05).support == pytest.approx([0.45, 0.65])


def test_gd_step_rejects_bad_gamma():
    with pytest.raises(ValueError):
        gd_step([0.0], [1.0], 0.0)


def test_particle_gd_examples():
    traj = particle_gd([0.4, 2.0], [0.4, 2.0], 0.01, 100)
    assert len(traj.snapshots) == 1 and traj.final_winf == 0.0
    traj = particle_gd([0.0], [1.0], 0.25, 100)
    assert [s.winf for s in traj.snapshots] == pytest.approx([1.0, 0.75, 0.5, 0.25])


def test_particle_gd_figure_setup():
    rng = make_rng(7)
    w = rng.uniform(0, np.pi, 5)
    v = rng.uniform(0, np.pi, 5)
    bound = iteration_bound(v, w, 0.01)
    traj = particle_gd(v, w, 0.01, bound)
    assert traj.final_winf <= 0.01
    assert traj.iterations <= bound


def test_particle_gd_rejects_duplicates():
    with pytest.raises(ValueError):
        particle_gd([0.1, 0.1], [0.0, 1.0], 0.1, 10)


def test_trajectory_invariants():
    t = Trajectory(gamma=0.1)
    t.record(0, [0.0, 1.0], 0.5)
    with pytest.raises(ValueError):
        t.record(0, [0.0, 1.0], 0.5)
    with pytest.raises(ValueError):
        t.record(1, [0.0], 0.5)


@given(pairs(min_n=2), st.sampled_from([0.05, 0.01]))
def test_one_step_contraction(pair, gamma):
    v, w = pair
    if not distinct(v, 0):
        return
    before = winf_distance(v, w)
    after = winf_distance(gd_step(v, w, gamma), w)
    assert after <= max(before - gamma, gamma) + 1e-12


@given(pairs())
def test_gradient_points_toward_matched_target(pair):
    v, w = map(np.asarray, pair)
    if not (distinct(v, 0) and distinct(w, 0)):
        return
    n = v.size
    perm = match_particles(v, w).permutation
    for i in range(n):
        vi = v[perm[i]]
        if vi == w[i]:
            continue
        g = subgradient(v, w, int(perm[i]))
        assert np.sign(vi - w[i]) * g * n**2 / 2 >= 1 - 1e-12


def test_finite_differences(rng):
    h = 1e-6
    checked = 0
    while checked < 500:
        n = int(rng.integers(1, 8))
        v, w = rng.uniform(0, np.pi, n), rng.uniform(0, np.pi, n)
        i = int(rng.integers(n))
        others = np.concatenate([w, np.delete(v, i)])
        if np.min(np.abs(others - v[i])) <= 10 * h:
            continue
        up, down = v.copy(), v.copy()
        up[i] += h
        down[i] -= h
        fd = (energy_distance_direct(up, w) - energy_distance_direct(down, w)) / (2 * h)
        assert fd == pytest.approx(subgradient(v, w, i), abs=1e-6)
        checked += 1
