import numpy as np
import pytest

from sparse_recover.errors import NumericalFailure
from sparse_recover.fourier import moments, sign_series_coeffs
from sparse_recover.measures import winf_distance
from sparse_recover.superres import (
    RecoveryConfig,
    approx_gd_step,
    default_params,
    empirical_params,
    init_particles,
    iterations_for,
    moments_for,
    recover_1d,
)
from sparse_recover.synthetic import make_rng, spikes_1d


def test_default_params_schedule():
    cfg = default_params(2, 0.3, 0.15)
    assert cfg.gamma == pytest.approx(0.05)
    assert cfg.m == 32_000
    assert cfg.k == 12_567
    assert cfg.mode == "theory"
    assert default_params(10, 0.01, 0.3).gamma == 0.01


def test_schedule_helpers():
    assert iterations_for(0.01) == 62_832
    assert moments_for(10, 0.1) == 80_000


def test_empirical_params():
    cfg = empirical_params(0.01, 200)
    assert (cfg.m, cfg.k, cfg.mode) == (200, iterations_for(0.01), "empirical")
    assert empirical_params(0.01, 200, k=5).k == 5


@pytest.mark.parametrize("kwargs", [dict(gamma=0, m=1, k=1), dict(gamma=1, m=0, k=1), dict(gamma=1, m=1, k=1, mode="x")])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        RecoveryConfig(**kwargs)


def test_default_params_validation():
    with pytest.raises(ValueError):
        default_params(0, 0.3, 0.1)


def test_init_particles_distinct_in_domain():
    p = init_particles(50, make_rng(1))
    assert p.is_distinct()
    assert np.all((p.support >= 0) & (p.support <= np.pi))


def test_init_particles_gives_up(monkeypatch):
    class Stuck:
        def uniform(self, lo, hi, size):
            return np.full(size, 1.0)

    with pytest.raises(NumericalFailure):
        init_particles(3, Stuck())


@pytest.mark.parametrize("seed", range(5))
def test_single_step_matches_reference(seed):
    rng = make_rng(seed)
    truth = spikes_1d(6, rng)
    init = init_particles(6, rng)
    cfg = empirical_params(0.03, 257, k=1)
    phi = moments(truth, cfg.m)
    got = recover_1d(phi, init, cfg).final.support
    want = approx_gd_step(init.support, phi, sign_series_coeffs(cfg.m), cfg.gamma)
    assert np.array_equal(got, want)


def test_cycle_shortcut_matches_full_run():
    rng = make_rng(3)
    truth = spikes_1d(4, rng)
    init = init_particles(4, rng)
    cfg = empirical_params(0.05, 120, k=400)
    phi = moments(truth, cfg.m)
    res = recover_1d(phi, init, cfg, truth=truth)
    assert res.cycle_period is not None
    v, c = init.support, sign_series_coeffs(cfg.m)
    for _ in range(cfg.k):
        v = approx_gd_step(v, phi, c, cfg.gamma)
    assert np.allclose(res.final.support, v, atol=1e-12)


def test_trajectory_shape_and_truthless_run():
    rng = make_rng(4)
    truth = spikes_1d(3, rng)
    cfg = empirical_params(0.02, 100, k=1000)
    res = recover_1d(moments(truth, 100), init_particles(3, rng), cfg, stride=100)
    iters = [s.iteration for s in res.trajectory.snapshots]
    assert iters == list(range(0, 1001, 100))
    assert res.matched_error is None and np.isnan(res.trajectory.final_winf)


def test_recover_1d_input_checks():
    cfg = empirical_params(0.1, 10, k=2)
    phi = moments([0.5, 1.0], 10)
    with pytest.raises(ValueError):
        recover_1d(moments([0.5, 1.0], 11), [0.2, 0.4], cfg)
    with pytest.raises(ValueError):
        recover_1d(phi, [0.2], cfg)
    with pytest.raises(ValueError):
        recover_1d(phi, [0.2, 0.2], cfg)
    with pytest.raises(ValueError):
        recover_1d(phi, [-0.1, 0.4], cfg)


def test_particles_stay_in_domain():
    rng = make_rng(9)
    truth = spikes_1d(5, rng)
    cfg = empirical_params(0.05, 60, k=500)
    res = recover_1d(moments(truth, 60), init_particles(5, rng), cfg, truth=truth, stride=1)
    for snap in res.trajectory.snapshots:
        assert np.all((snap.positions >= 0) & (snap.positions <= np.pi))


def test_theory_mode_small_instance():
    rng = make_rng(11)
    truth = spikes_1d(2, rng, ell=0.3)
    cfg = default_params(2, 0.3, 0.15)
    res = recover_1d(moments(truth, cfg.m), init_particles(2, rng), cfg, truth=truth)
    assert res.matched_error == winf_distance(res.final, truth)
    assert res.matched_error <= 0.15
