import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sparse_recover.fourier import (
    LatticeEvaluator,
    approx_cross_subgradient,
    approx_sign,
    cross_term_lattice,
    feature_map,
    features_for_order,
    gibbs_error_bound,
    moments,
    phase_ramp,
    sign_series_coeffs,
    truncated_sign,
)

angles = st.floats(0, np.pi, allow_nan=False)


def test_coefficient_examples():
    assert sign_series_coeffs(3) == pytest.approx([4 / np.pi, 0.0, 4 / (3 * np.pi)])
    assert sign_series_coeffs(1) == pytest.approx([4 / np.pi])
    assert sign_series_coeffs(2)[1] == 0.0
    with pytest.raises(ValueError):
        sign_series_coeffs(0)


def test_feature_map_examples():
    assert np.all(feature_map(0.0, 5) == 1)
    assert feature_map(np.pi, 1)[0] == pytest.approx(-1)


@given(st.floats(-100, 100, allow_nan=False), st.integers(1, 64))
def test_features_unit_modulus(w, m):
    assert np.allclose(np.abs(feature_map(w, m)), 1.0)


def test_moment_examples():
    assert np.allclose(moments([0.0], 7).values, 1.0)
    assert moments([0.0, np.pi], 3).values[0] == pytest.approx(0.0, abs=1e-15)


@given(st.lists(angles, min_size=1, max_size=6), st.integers(1, 300), st.randoms())
def test_moments_bounded_and_order_free(w, m, r):
    phi = moments(w, m)
    assert np.all(np.abs(phi.values) <= 1 + 1e-12)
    shuffled = list(w)
    r.shuffle(shuffled)
    assert np.array_equal(moments(shuffled, m).values, phi.values)
    direct = np.exp(-1j * np.outer(w, np.arange(1, m + 1))).mean(axis=0)
    assert np.allclose(phi.values, direct, atol=1e-12)


def test_phase_ramp_matches_exp():
    p = np.arange(10_000)
    assert np.allclose(phase_ramp(p.size, 0.37, 1.1), np.exp(-1j * (1.1 + 0.37 * p)), atol=1e-11)


def test_truncated_sign_examples():
    assert truncated_sign(0.0, 9) == 0.0
    assert truncated_sign(np.pi / 2, 1) == pytest.approx(4 / np.pi)
    assert features_for_order(64) == 129


@given(st.floats(-4, 4, allow_nan=False), st.integers(1, 200))
def test_truncated_sign_odd(delta, m):
    assert truncated_sign(-delta, m) == pytest.approx(-truncated_sign(delta, m), abs=1e-12)


@given(angles, angles, st.integers(1, 200))
def test_approx_sign_is_truncated_sign(v, w, m):
    assert approx_sign(v, w, sign_series_coeffs(m)) == pytest.approx(truncated_sign(v - w, m), abs=1e-12)


@given(angles, st.lists(angles, min_size=1, max_size=6), st.integers(1, 200))
def test_cross_subgradient_sums_approx_signs(v, w, m):
    c = sign_series_coeffs(m)
    total = sum(approx_sign(v, x, c) for x in w)
    assert approx_cross_subgradient(v, moments(w, m), c) == pytest.approx(total, abs=1e-10)


def test_cross_subgradient_length_check():
    with pytest.raises(ValueError):
        approx_cross_subgradient(0.1, moments([0.2], 5), sign_series_coeffs(4))


@pytest.mark.parametrize("m", [1, 2, 7, 200, 3001])
def test_lattice_matches_pointwise(m, rng):
    w = rng.uniform(0, np.pi, 4)
    phi, c = moments(w, m), sign_series_coeffs(m)
    start, step = 0.713, 0.0123
    table = cross_term_lattice(phi, c, start, step, 80)
    ref = [approx_cross_subgradient(start + j * step, phi, c) for j in range(80)]
    assert np.allclose(table, ref, atol=1e-10)


def test_lattice_evaluator_reused_across_starts(rng):
    phi, c = moments(rng.uniform(0, np.pi, 3), 501), sign_series_coeffs(501)
    ev = LatticeEvaluator(phi, c, 0.05, 40)
    for start in (0.0, 1.234, np.pi):
        ref = [approx_cross_subgradient(start + j * 0.05, phi, c) for j in range(40)]
        assert np.allclose(ev(start), ref, atol=1e-10)


@pytest.mark.parametrize("m_b", [16, 64, 256])
def test_gibbs_bound_holds_away_from_the_endpoints(m_b):
    # the bound is checked on |delta| <= 4 pi / 5; near +-pi the periodic
    # series returns to 0 while sign stays at +-1 (see the acceptance suite)
    delta = np.linspace(-4 * np.pi / 5, 4 * np.pi / 5, 10_000)
    delta = delta[np.abs(delta) >= 1e-3]
    err = np.abs(truncated_sign(delta, features_for_order(m_b)) - np.sign(delta))
    assert np.all(err <= gibbs_error_bound(delta, m_b))


def test_series_vanishes_at_pi():
    # periodicity: g(pi) = 0 for every order, so |g - sign| = 1 there
    for m_b in (16, 64, 256):
        assert abs(truncated_sign(np.pi, features_for_order(m_b))) < 1e-12


@pytest.mark.parametrize("m_b", [13, 20, 50])
def test_series_bounded_near_origin(m_b):
    delta = np.linspace(-np.pi / 4, np.pi / 4, 10_000)
    assert np.max(np.abs(truncated_sign(delta, features_for_order(m_b)))) <= 1.9
