"""Experiment orchestration: config in, result files plus summary payload out.

This is the layer the HTTP service and the command-line client both call.
Every run writes an echo of the effective configuration and a manifest
(seed, version, timings) next to its data files; the returned payload is a
JSON-compatible summary of the outcome.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import (
    CoherenceUndefinedError,
    below_threshold_decay_rate,
    steady_state,
    threshold_pump,
)
from .config import ConfigError, RunConfig, emit_config
from .correlation import ergodicity_metric, fit_decay, g1_ensemble, g1_time_avg
from .ensemble import run_ensemble
from .integration import IntegrationConfig, initial_state, integrate
from .output import (
    write_correlation,
    write_json_doc,
    write_manifest,
    write_spectrum,
    write_table,
    write_trajectory,
)
from .spectral import bifurcation_scan

__all__ = ["run"]


def run(
    cfg: RunConfig,
    experiment: str | None = None,
    seed: int | None = None,
    workers: int | None = None,
    out_dir: str | None = None,
) -> dict:
    """Run one experiment and return its summary payload.

    ``experiment``, ``seed``, ``workers`` and ``out_dir`` override the
    corresponding config entries; the echo written alongside the outputs
    reflects the overridden values.
    """
    updates: dict = {}
    if seed is not None:
        updates["seed"] = seed
    if experiment is not None:
        updates["experiment"] = experiment
    if out_dir is not None:
        updates["out_dir"] = out_dir
    if workers is not None:
        updates["ensemble"] = cfg.ensemble.model_copy(update={"workers": workers})
    if updates:
        cfg = cfg.model_copy(update=updates)

    if cfg.out_dir is None:
        raise ConfigError("out_dir: required (set it in the config or pass --out-dir)")
    runner = _RUNNERS.get(cfg.experiment)
    if runner is None:
        raise ConfigError(f"experiment: unknown experiment {cfg.experiment!r}")

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "effective_config.json").write_text(emit_config(cfg), encoding="utf-8")

    started = time.perf_counter()
    payload = runner(cfg, out)
    wall = time.perf_counter() - started

    payload["experiment"] = cfg.experiment
    payload["out_dir"] = str(out)
    payload["files"]["config"] = "effective_config.json"
    payload["files"]["manifest"] = "manifest.json"
    write_manifest(
        out / "manifest.json",
        experiment=cfg.experiment,
        version=__version__,
        seed=cfg.seed,
        wall_seconds=wall,
        files=payload["files"].values(),
    )
    return payload


def _final_sample(traj) -> dict:
    theta = complex(traj.psi_l[-1] * np.conj(traj.psi_r[-1]))
    return {
        "t": float(traj.times[-1]),
        "pop_l": float(traj.pop_l[-1]),
        "pop_r": float(traj.pop_r[-1]),
        "n_l": float(traj.n_l[-1]),
        "n_r": float(traj.n_r[-1]),
        "re_theta": theta.real,
        "im_theta": theta.imag,
    }


def _run_simulate(cfg: RunConfig, out: Path) -> dict:
    params = cfg.model_params()
    icfg = cfg.integration_config()
    traj = integrate(initial_state(params, icfg), params, icfg, cfg.noise_config(), cfg.seed)
    write_trajectory(out / "trajectory.tsv", traj)
    return {
        "files": {"trajectory": "trajectory.tsv"},
        "seed": cfg.seed,
        "clamp_count": traj.clamp_count,
        "final": _final_sample(traj),
    }


def _run_ensemble(cfg: RunConfig, out: Path) -> dict:
    result = run_ensemble(cfg.ensemble_config(), workers=cfg.ensemble.workers)
    write_table(
        out / "ensemble_mean.tsv",
        ("t", "mean_pop_l", "mean_pop_r", "re_mean_theta", "im_mean_theta"),
        (
            result.times,
            result.mean_pop_l,
            result.mean_pop_r,
            result.mean_theta.real,
            result.mean_theta.imag,
        ),
    )
    np.save(out / "realizations_psi_l.npy", np.stack([s.psi_l for s in result.trajectories]))
    np.save(out / "realizations_psi_r.npy", np.stack([s.psi_r for s in result.trajectories]))
    np.save(out / "times.npy", result.times)
    return {
        "files": {
            "mean_series": "ensemble_mean.tsv",
            "psi_l": "realizations_psi_l.npy",
            "psi_r": "realizations_psi_r.npy",
            "times": "times.npy",
        },
        "n_realizations": cfg.ensemble.n_realizations,
        "base_seed": cfg.ensemble.base_seed,
        "final_mean": {
            "pop_l": float(result.mean_pop_l[-1]),
            "pop_r": float(result.mean_pop_r[-1]),
            "re_theta": float(result.mean_theta[-1].real),
            "im_theta": float(result.mean_theta[-1].imag),
        },
    }


def _run_steady(cfg: RunConfig, out: Path) -> dict:
    params = cfg.model_params()
    sol = steady_state(params)
    doc = {
        "threshold_pump": threshold_pump(params),
        "above_threshold": sol.above_threshold,
        "pop": sol.pop,
        "n_l": sol.n_l,
        "n_r": sol.n_r,
        "gamma": sol.gamma,
        "im_theta": sol.im_theta,
        "re_theta": sol.re_theta,
    }
    if not sol.above_threshold:
        doc["decay_rate"] = below_threshold_decay_rate(params)
    units = {
        "threshold_pump": "J",
        "gamma": "J",
        "pop": "dimensionless",
        "n_l": "dimensionless",
        "n_r": "dimensionless",
        "im_theta": "dimensionless",
        "re_theta": "dimensionless (non-negative branch)",
    }
    write_json_doc(out / "steady.json", {**doc, "units": units})
    return {"files": {"steady": "steady.json"}, **doc}


def _run_spectrum(cfg: RunConfig, out: Path) -> dict:
    spec = cfg.spectrum
    j = complex(cfg.model.j_re, cfg.model.j_im)
    scan = bifurcation_scan(spec.gamma_min, spec.gamma_max, spec.steps, j)
    write_spectrum(out / "spectrum.tsv", scan)
    return {
        "files": {"spectrum": "spectrum.tsv"},
        "steps": spec.steps,
        "gamma_min": spec.gamma_min,
        "gamma_max": spec.gamma_max,
        "exceptional_point": abs(j),
    }


def _run_correlate(cfg: RunConfig, out: Path) -> dict:
    corr = cfg.correlate
    icfg = cfg.integration_config()
    if corr.t0 + corr.max_lag > icfg.t_end:
        raise ConfigError(
            "correlate.t0: t0 + max_lag exceeds integration.t_end "
            f"({corr.t0} + {corr.max_lag} > {icfg.t_end})"
        )
    result = run_ensemble(cfg.ensemble_config(), workers=cfg.ensemble.workers)
    series_ens = g1_ensemble(result.trajectories, corr.t0, corr.well)
    write_correlation(out / "g1_ensemble.tsv", series_ens)
    rate, r2 = fit_decay(series_ens, corr.fit_floor)
    payload: dict = {
        "files": {"g1_ensemble": "g1_ensemble.tsv"},
        "n_realizations": cfg.ensemble.n_realizations,
        "t0": corr.t0,
        "well": corr.well,
        "ensemble_fit": {"rate": rate, "r_squared": r2},
        "time_avg_fit": None,
        "ergodicity": None,
    }
    if corr.time_avg:
        params = cfg.model_params()
        stride_t = icfg.dt * icfg.record_stride
        t_end_long = corr.t_i + corr.window + corr.max_lag + stride_t
        n_long = int(np.ceil(t_end_long / stride_t))
        long_cfg = IntegrationConfig(
            t_end=n_long * stride_t,
            dt=icfg.dt,
            record_stride=icfg.record_stride,
            seed_amp_l=icfg.seed_amp_l,
            seed_amp_r=icfg.seed_amp_r,
            n0_policy=icfg.n0_policy,
            n_l0=icfg.n_l0,
            n_r0=icfg.n_r0,
            divergence_bound=icfg.divergence_bound,
        )
        traj = integrate(
            initial_state(params, long_cfg),
            params,
            long_cfg,
            cfg.noise_config(),
            corr.time_avg_seed,
        )
        series_ta = g1_time_avg(
            traj, corr.t_i, corr.t_i + corr.window, corr.max_lag, corr.well
        )
        write_correlation(out / "g1_time_avg.tsv", series_ta)
        ta_rate, ta_r2 = fit_decay(series_ta, corr.fit_floor)
        payload["files"]["g1_time_avg"] = "g1_time_avg.tsv"
        payload["time_avg_fit"] = {"rate": ta_rate, "r_squared": ta_r2}
        payload["ergodicity"] = ergodicity_metric(series_ens, series_ta, corr.max_lag)
    return payload


def _run_sweep(cfg: RunConfig, out: Path) -> dict:
    if cfg.sweep is None:
        raise ConfigError("sweep: section required for the sweep experiment")
    sw = cfg.sweep
    p_ls = np.linspace(sw.p_l_min, sw.p_l_max, sw.p_l_steps)
    p_rs = np.linspace(sw.p_r_min, sw.p_r_max, sw.p_r_steps)
    rows = []
    base = cfg.model
    for p_l in p_ls:
        for p_r in p_rs:
            params = base.model_copy(update={"p_l": float(p_l), "p_r": float(p_r)}).to_params()
            try:
                sol = steady_state(params)
                im_theta, re_theta = sol.im_theta, sol.re_theta
            except CoherenceUndefinedError:
                sol = None
                im_theta = re_theta = float("nan")
            rows.append(
                (
                    float(p_l),
                    float(p_r),
                    threshold_pump(params),
                    float(sol.above_threshold) if sol else float("nan"),
                    sol.pop if sol else float("nan"),
                    sol.n_l if sol else float("nan"),
                    sol.n_r if sol else float("nan"),
                    sol.gamma if sol else float("nan"),
                    im_theta,
                    re_theta,
                )
            )
    columns = [np.array(col) for col in zip(*rows)]
    write_table(
        out / "sweep.tsv",
        (
            "p_l",
            "p_r",
            "threshold_pump",
            "above_threshold",
            "pop",
            "n_l",
            "n_r",
            "gamma",
            "im_theta",
            "re_theta",
        ),
        columns,
    )
    return {"files": {"sweep": "sweep.tsv"}, "n_points": len(rows)}


_RUNNERS = {
    "simulate": _run_simulate,
    "ensemble": _run_ensemble,
    "steady": _run_steady,
    "spectrum": _run_spectrum,
    "correlate": _run_correlate,
    "sweep": _run_sweep,
}
