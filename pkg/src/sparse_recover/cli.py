"""Seeded experiment runner.

Every run writes a CSV (trajectory or table) and a flat JSON summary. Ground
truth is always synthesized from the seed; moments are computed from it.

Exit codes: 0 success, 2 usage or invalid parameters, 3 assumption
violation, 4 numerical or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .energy import Trajectory, energy_distance, iteration_bound, particle_gd
from .errors import AssumptionViolation, NumericalFailure
from .fourier import features_for_order, gibbs_error_bound, moments, truncated_sign
from .highdim import matched_error, recover_nd_deterministic, recover_nd_randomized
from .neural import population_loss_analytic, population_loss_mc
from .superres import default_params, empirical_params, init_particles, recover_1d
from .synthetic import box_cloud, make_rng, sphere_cloud, spikes_1d

COMMANDS = ("energy-gd", "recover1d", "recoverd", "nn-demo", "bounds-check")
THREADS_ENV = "SPARSE_RECOVER_THREADS"

EXIT_OK, EXIT_USAGE, EXIT_ASSUMPTION, EXIT_NUMERICAL = 0, 2, 3, 4


@dataclass(frozen=True)
class ExperimentSpec:
    command: str = "energy-gd"
    seed: int = 0
    n: int = 5
    d: int = 3
    gamma: float = 0.01
    m: int = 200
    k: Optional[int] = None
    ell: float = 0.3
    eps: float = 0.15
    beta: float = 0.25
    kappa: float = 0.2
    samples: int = 100_000
    mode: str = "theory"
    algorithm: str = "deterministic"
    beta_mode: str = "exact"
    m_b: str = "16,64,256"
    delta_max: float = math.pi
    grid: int = 10_000
    max_iters: Optional[int] = None
    out: Optional[str] = None
    summary: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        for name in ("n", "d", "m", "samples", "grid"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        for name in ("gamma", "ell", "eps", "beta", "delta_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.kappa < 1:
            raise ValueError("kappa must lie in (0, 1)")
        if self.mode not in ("theory", "empirical"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.algorithm not in ("deterministic", "randomized"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.beta_mode not in ("exact", "formula"):
            raise ValueError(f"unknown beta mode {self.beta_mode!r}")
        self.orders()

    def orders(self) -> list[int]:
        vals = [int(x) for x in str(self.m_b).split(",") if x.strip()]
        if not vals or min(vals) < 1:
            raise ValueError("m_b must be a comma-separated list of positive integers")
        return vals

    def csv_path(self) -> Path:
        return Path(self.out or f"{self.command}_seed{self.seed}.csv")

    def summary_path(self) -> Path:
        return Path(self.summary or self.csv_path().with_suffix(".json"))


def _field_types() -> dict:
    hints = {"int": int, "float": float, "str": str, "Optional[int]": int, "Optional[str]": str}
    return {f.name: hints[f.type] for f in dataclasses.fields(ExperimentSpec)}


def parse_config(path: str) -> dict:
    """key = value lines; blank lines and # comments ignored; dashes in keys read as underscores."""
    types = _field_types()
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in types or key == "command":
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = types[key](value)
    return out


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


def write_summary(summary: dict, path: Path) -> None:
    text = json.dumps({k: _jsonable(v) for k, v in summary.items()}, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_trajectory(traj: Trajectory, path) -> None:
    """CSV ``iter,particle,value,winf``, one row per snapshot and particle."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iter", "particle", "value", "winf"])
        for snap in traj.snapshots:
            for i, x in enumerate(snap.positions):
                w.writerow([snap.iteration, i, _fmt(x), _fmt(snap.winf)])


def emit_cloud(points: np.ndarray, iteration: int, path) -> None:
    """CSV ``iter,particle,coord,value`` for a d-dimensional point cloud."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iter", "particle", "coord", "value"])
        for i, row in enumerate(np.atleast_2d(points)):
            for q, x in enumerate(row):
                w.writerow([iteration, i, q, _fmt(x)])


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{THREADS_ENV} must be at least 1")
    return value


def _run_energy_gd(spec: ExperimentSpec, rng) -> dict:
    truth_rng, init_rng = rng.spawn(2)
    truth = spikes_1d(spec.n, truth_rng)
    init = init_particles(spec.n, init_rng)
    bound = iteration_bound(init, truth, spec.gamma)
    max_iters = bound if spec.max_iters is None else spec.max_iters
    traj = particle_gd(init, truth, spec.gamma, max_iters)
    emit_trajectory(traj, spec.csv_path())
    return {
        "n": spec.n,
        "gamma": spec.gamma,
        "max_iters": max_iters,
        "iteration_bound": bound,
        "iterations": traj.snapshots[-1].iteration,
        "initial_winf": traj.snapshots[0].winf,
        "final_winf": traj.final_winf,
        "matched_error": traj.final_winf,
        "energy_final": energy_distance(traj.snapshots[-1].positions, truth),
        "mode": "theory",
    }


def _run_recover1d(spec: ExperimentSpec, rng) -> dict:
    truth_rng, init_rng = rng.spawn(2)
    if spec.mode == "theory":
        config = default_params(spec.n, spec.ell, spec.eps)
        truth = spikes_1d(spec.n, truth_rng, ell=spec.ell)
    else:
        config = empirical_params(spec.gamma, spec.m, spec.k)
        truth = spikes_1d(spec.n, truth_rng)
    result = recover_1d(moments(truth, config.m), init_particles(spec.n, init_rng), config, truth=truth)
    emit_trajectory(result.trajectory, spec.csv_path())
    return {
        "n": spec.n,
        "gamma": config.gamma,
        "m": config.m,
        "k": config.k,
        "ell": config.ell,
        "eps": config.eps,
        "mode": config.mode,
        "matched_error": result.matched_error,
        "cycle_start": result.cycle_start,
        "cycle_period": result.cycle_period,
    }


def _run_recoverd(spec: ExperimentSpec, rng) -> dict:
    truth_rng, run_rng = rng.spawn(2)
    threads = _threads()
    summary = {"n": spec.n, "d": spec.d, "eps": spec.eps, "algorithm": spec.algorithm, "threads": threads}
    if spec.algorithm == "deterministic":
        truth = box_cloud(spec.n, spec.d, truth_rng, spec.beta)
        res = recover_nd_deterministic(truth, spec.beta, spec.eps, run_rng, threads=threads)
        points, inner = res.points, res
        summary.update(beta=spec.beta, matched_error=matched_error(points, truth, np.inf), error_norm="inf")
    else:
        truth = sphere_cloud(spec.n, spec.d, truth_rng, ell=spec.ell)
        res = recover_nd_randomized(
            truth, spec.ell, spec.kappa, spec.eps, run_rng, beta_mode=spec.beta_mode, threads=threads
        )
        points, inner = res.points, res.inner
        summary.update(
            ell=spec.ell,
            kappa=spec.kappa,
            beta_mode=spec.beta_mode,
            beta=res.beta,
            z_norm=res.projection.spectral_norm,
            z_inverse_norm=float(np.linalg.norm(res.projection.inverse, 2)),
            matched_error=matched_error(points, truth, 2),
            error_norm="2",
        )
    cfg = inner.config
    summary.update(gamma=cfg.gamma, m=cfg.m, k=cfg.k, mode=cfg.mode)
    emit_cloud(points, cfg.k, spec.csv_path())
    return summary


def _run_nn_demo(spec: ExperimentSpec, rng) -> dict:
    truth_rng, init_rng, mc_rng = rng.spawn(3)
    w = spikes_1d(spec.n, truth_rng)
    v = init_particles(spec.n, init_rng)
    loss = population_loss_analytic(v.support, w.support)
    est = population_loss_mc(v.support, w.support, spec.samples, mc_rng)
    max_iters = iteration_bound(v, w, spec.gamma) if spec.max_iters is None else spec.max_iters
    traj = particle_gd(v, w, spec.gamma, max_iters)
    emit_trajectory(traj, spec.csv_path())
    return {
        "n": spec.n,
        "gamma": spec.gamma,
        "samples": spec.samples,
        "loss_analytic": loss,
        "pi_loss": math.pi * loss,
        "energy": energy_distance(v, w),
        "mc_mean": est.mean,
        "mc_stderr": est.stderr,
        "mc_z_score": (est.mean - loss) / est.stderr if est.stderr > 0 else None,
        "final_loss": population_loss_analytic(traj.snapshots[-1].positions, w.support),
        "matched_error": traj.final_winf,
        "mode": "theory",
    }


def bounds_table(orders, grid: int = 10_000, delta_min: float = 1e-3, delta_max: float = math.pi) -> list[dict]:
    """Pointwise error of g against 4 (1/(m_b |d|) + 1/m_b), and max |g| on |d| <= pi/4."""
    delta = np.linspace(-delta_max, delta_max, grid)
    delta = delta[np.abs(delta) >= delta_min]
    near = np.linspace(-math.pi / 4, math.pi / 4, grid)
    rows = []
    for m_b in orders:
        m = features_for_order(m_b)
        err = np.abs(truncated_sign(delta, m) - np.sign(delta))
        bound = gibbs_error_bound(delta, m_b)
        bad = err > bound
        max_g = float(np.max(np.abs(truncated_sign(near, m))))
        rows.append(
            {
                "m_b": m_b,
                "max_error": float(err.max()),
                "violations": int(bad.sum()),
                "max_ratio": float(np.max(err / bound)),
                "first_violation": float(np.min(np.abs(delta[bad]))) if bad.any() else math.nan,
                "max_abs_g": max_g,
                "status": "PASS" if not bad.any() and max_g <= 1.9 else "FAIL",
            }
        )
    return rows


def _run_bounds_check(spec: ExperimentSpec, rng) -> dict:
    rows = bounds_table(spec.orders(), spec.grid, delta_max=spec.delta_max)
    cols = ["m_b", "max_error", "violations", "max_ratio", "first_violation", "max_abs_g", "status"]
    with open(spec.csv_path(), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r[c]) if isinstance(r[c], float) else r[c] for c in cols])
    for r in rows:
        print(
            f"m_b={r['m_b']:<5d} max|g-sign|={r['max_error']:.4g} violations={r['violations']} "
            f"max|g|(|d|<=pi/4)={r['max_abs_g']:.4f} {r['status']}"
        )
    return {
        "m_b": spec.m_b,
        "grid": spec.grid,
        "delta_max": spec.delta_max,
        "violations": sum(r["violations"] for r in rows),
        "all_pass": all(r["status"] == "PASS" for r in rows),
        "mode": "theory",
    }


RUNNERS = {
    "energy-gd": _run_energy_gd,
    "recover1d": _run_recover1d,
    "recoverd": _run_recoverd,
    "nn-demo": _run_nn_demo,
    "bounds-check": _run_bounds_check,
}


def run(spec: ExperimentSpec) -> dict:
    """Execute one experiment; returns the summary that was written to disk."""
    start = time.perf_counter()
    body = RUNNERS[spec.command](spec, make_rng(spec.seed))
    summary = {"command": spec.command, "seed": spec.seed, **body}
    summary["wall_clock_s"] = time.perf_counter() - start
    write_summary(summary, spec.summary_path())
    return summary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sparse-recover", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="CSV output path")
    common.add_argument("--summary", help="JSON summary path (default: CSV path with .json)")
    specs = {
        "energy-gd": ("n", "gamma", "max-iters"),
        "recover1d": ("n", "gamma", "m", "k", "ell", "eps", "mode"),
        "recoverd": ("n", "d", "beta", "eps", "ell", "kappa", "algorithm", "beta-mode"),
        "nn-demo": ("n", "gamma", "samples", "max-iters"),
        "bounds-check": ("mB", "delta-max", "grid"),
    }
    types = _field_types()
    choices = {
        "mode": ("theory", "empirical"),
        "algorithm": ("deterministic", "randomized"),
        "beta-mode": ("exact", "formula"),
    }
    for name, flags in specs.items():
        p = sub.add_parser(name, parents=[common], argument_default=argparse.SUPPRESS)
        for flag in flags:
            dest = "m_b" if flag == "mB" else flag.replace("-", "_")
            p.add_argument(f"--{flag}", dest=dest, type=types[dest], choices=choices.get(flag))
    return parser


def spec_from_args(argv=None) -> ExperimentSpec:
    ns = vars(build_parser().parse_args(argv))
    values = parse_config(ns.pop("config")) if "config" in ns else {}
    values.update(ns)
    return ExperimentSpec(**values)


def _fail(code: int, kind: str, exc: BaseException) -> int:
    print(json.dumps({"error": kind, "exit_code": code, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        spec = spec_from_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except ValueError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except OSError as exc:
        return _fail(EXIT_NUMERICAL, "io", exc)
    try:
        run(spec)
    except AssumptionViolation as exc:
        return _fail(EXIT_ASSUMPTION, "assumption_violation", exc)
    except ValueError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except (NumericalFailure, FloatingPointError, np.linalg.LinAlgError, MemoryError) as exc:
        return _fail(EXIT_NUMERICAL, "numerical", exc)
    except OSError as exc:
        return _fail(EXIT_NUMERICAL, "io", exc)
    return EXIT_OK
