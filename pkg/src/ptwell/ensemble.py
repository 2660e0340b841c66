"""Deterministic ensembles of independent noisy realizations.

Each realization integrates the same model and initial state with its own
noise stream, seeded by a stateless mix of (base_seed, index), so results
are reproducible across runs and independent of scheduling. Aggregation is
a fixed-order reduction over the retained per-realization series.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .integration import (
    DivergenceError,
    IntegrationConfig,
    NoiseConfig,
    Trajectory,
    initial_state,
    integrate,
)
from .model import ModelParams

__all__ = [
    "EnsembleConfig",
    "FieldSeries",
    "EnsembleResult",
    "derive_seed",
    "run_ensemble",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def derive_seed(base_seed: int, index: int) -> int:
    """Per-realization seed from a stateless 64-bit mix.

    Applies the SplitMix64 finalizer to base_seed + (index + 1) * golden
    ratio increment (mod 2^64). Both stages are bijections on 64-bit words,
    so distinct indices give distinct seeds for any fixed base seed, and
    the result depends only on the two integers.
    """
    if index < 0:
        raise ValueError("index must be >= 0")
    z = (base_seed + _GOLDEN * (index + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class EnsembleConfig:
    """Shared physics plus ensemble bookkeeping for N realizations."""

    params: ModelParams
    integration: IntegrationConfig
    noise: NoiseConfig
    n_realizations: int = 1000
    base_seed: int = 0

    def __post_init__(self) -> None:
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")


@dataclass(frozen=True)
class FieldSeries:
    """Per-realization series retained at recording resolution."""

    times: np.ndarray
    psi_l: np.ndarray
    psi_r: np.ndarray
    n_l: np.ndarray
    n_r: np.ndarray


@dataclass(frozen=True)
class EnsembleResult:
    """Aggregated ensemble output plus the retained realizations.

    The mean series are exact arithmetic means (fixed-order reduction) of
    the retained series, computed after all realizations complete.
    """

    times: np.ndarray
    mean_pop_l: np.ndarray
    mean_pop_r: np.ndarray
    mean_theta: np.ndarray
    trajectories: list[FieldSeries] = field(repr=False)
    seeds_used: list[int] = field(repr=False)


def _as_series(traj: Trajectory) -> FieldSeries:
    return FieldSeries(
        times=traj.times,
        psi_l=traj.psi_l,
        psi_r=traj.psi_r,
        n_l=traj.n_l,
        n_r=traj.n_r,
    )


def run_ensemble(cfg: EnsembleConfig, workers: int = 1) -> EnsembleResult:
    """Run the N realizations and aggregate.

    ``workers`` only controls concurrency; results are bitwise independent
    of it. A diverging realization aborts the whole ensemble, the error
    carrying the realization index.
    """
    init = initial_state(cfg.params, cfg.integration)
    seeds = [derive_seed(cfg.base_seed, i) for i in range(cfg.n_realizations)]

    def one(index: int) -> FieldSeries:
        try:
            traj = integrate(init, cfg.params, cfg.integration, cfg.noise, seeds[index])
        except DivergenceError as err:
            raise DivergenceError(err.time, realization=index) from None
        return _as_series(traj)

    indices = range(cfg.n_realizations)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            series = list(pool.map(one, indices))
    else:
        series = [one(i) for i in indices]

    n = cfg.n_realizations
    psi_l_all = np.stack([s.psi_l for s in series])
    psi_r_all = np.stack([s.psi_r for s in series])
    mean_pop_l = np.add.reduce(np.abs(psi_l_all) ** 2, axis=0) / n
    mean_pop_r = np.add.reduce(np.abs(psi_r_all) ** 2, axis=0) / n
    mean_theta = np.add.reduce(psi_l_all * np.conj(psi_r_all), axis=0) / n
    return EnsembleResult(
        times=series[0].times,
        mean_pop_l=mean_pop_l,
        mean_pop_r=mean_pop_r,
        mean_theta=mean_theta,
        trajectories=series,
        seeds_used=seeds,
    )
