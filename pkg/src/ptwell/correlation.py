"""First-order field coherence estimators and decay-rate extraction.

Two estimators of g1: an ensemble average over realizations referenced to a
fixed time t0, and a sliding time average over a single long trajectory.
Both are self-normalized so |g1| = 1 at zero lag. The ensemble form uses the
conjugated first factor <psi*(t0) psi(t)>; the printed unconjugated product
would not normalize to one at zero lag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "EnsembleEstimator",
    "TimeAveragedEstimator",
    "CorrelationSeries",
    "g1_ensemble",
    "g1_time_avg",
    "fit_decay",
    "ergodicity_metric",
]

_WELLS = ("l", "r")


@dataclass(frozen=True)
class EnsembleEstimator:
    t0: float
    n_realizations: int


@dataclass(frozen=True)
class TimeAveragedEstimator:
    t_i: float
    t_f: float


@dataclass(frozen=True)
class CorrelationSeries:
    """g1 samples on a lag grid, with estimator metadata.

    ``stat_tol`` is the rough statistical scale of the estimator (1/sqrt(N)
    for the ensemble form, sqrt(max_lag / window) for the time average);
    |g1| may exceed 1 by about this much.
    """

    lags: np.ndarray
    values: np.ndarray
    estimator: EnsembleEstimator | TimeAveragedEstimator
    stat_tol: float

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)


def _pick_well(traj, well: str) -> np.ndarray:
    if well not in _WELLS:
        raise ValueError(f"well must be one of {_WELLS}, got {well!r}")
    return traj.psi_l if well == "l" else traj.psi_r


def _grid_index(times: np.ndarray, t: float, what: str) -> int:
    idx = int(round((t - times[0]) / (times[1] - times[0])))
    if idx < 0 or idx >= len(times) or abs(times[idx] - t) > 1e-9 * max(1.0, abs(t)):
        raise ValueError(f"{what} = {t!r} is not on the trajectory time grid")
    return idx


def g1_ensemble(trajectories: Sequence, t0: float, well: str = "l") -> CorrelationSeries:
    """Ensemble-averaged first-order coherence referenced to t0.

    g1(t) = <psi*(t0) psi(t)> / sqrt(<|psi(t0)|^2> <|psi(t)|^2>), averaged
    over realizations sharing one time grid; lags are reported relative to
    t0 (non-negative part of the grid).
    """
    if len(trajectories) < 2:
        raise ValueError("need at least 2 trajectories for an ensemble estimate")
    times = trajectories[0].times
    for k, traj in enumerate(trajectories[1:], start=1):
        if len(traj.times) != len(times) or not np.array_equal(traj.times, times):
            raise ValueError(f"trajectory {k} is on a different time grid")
    i0 = _grid_index(times, t0, "t0")

    fields = np.stack([_pick_well(traj, well) for traj in trajectories])
    ref = fields[:, i0]
    n = fields.shape[0]
    num = np.add.reduce(np.conj(ref)[:, None] * fields[:, i0:], axis=0) / n
    power = np.add.reduce(np.abs(fields[:, i0:]) ** 2, axis=0) / n
    den = np.sqrt(power[0] * power)
    values = num / den
    return CorrelationSeries(
        lags=times[i0:] - times[i0],
        values=values,
        estimator=EnsembleEstimator(t0=t0, n_realizations=n),
        stat_tol=1.0 / math.sqrt(n),
    )


def g1_time_avg(
    trajectory,
    t_i: float,
    t_f: float,
    max_lag: float,
    well: str = "l",
) -> CorrelationSeries:
    """Time-averaged first-order coherence from a single long trajectory.

    Discrete form of the sliding-window estimator: for each lag the field is
    correlated with its shifted copy over the window [t_i, t_f] and
    normalized by the two windowed powers.
    """
    if not t_f - t_i >= max_lag:
        raise ValueError("window t_f - t_i must be at least max_lag")
    times = trajectory.times
    psi = _pick_well(trajectory, well)
    dt_rec = times[1] - times[0]
    i_start = _grid_index(times, t_i, "t_i")
    i_stop = _grid_index(times, t_f, "t_f")
    n_lags = int(round(max_lag / dt_rec))
    if i_stop + n_lags >= len(times):
        raise ValueError(
            "window plus max_lag exceeds the trajectory extent "
            f"(need samples up to t = {t_f + max_lag!r})"
        )

    window = psi[i_start : i_stop + 1]
    power_w = float(np.add.reduce(np.abs(window) ** 2))
    values = np.empty(n_lags + 1, dtype=np.complex128)
    for k in range(n_lags + 1):
        shifted = psi[i_start + k : i_stop + 1 + k]
        num = np.add.reduce(window * np.conj(shifted))
        power_s = float(np.add.reduce(np.abs(shifted) ** 2))
        values[k] = num / math.sqrt(power_w * power_s)
    return CorrelationSeries(
        lags=np.arange(n_lags + 1, dtype=np.float64) * dt_rec,
        values=values,
        estimator=TimeAveragedEstimator(t_i=t_i, t_f=t_f),
        stat_tol=math.sqrt(max_lag / (t_f - t_i)),
    )


def fit_decay(series: CorrelationSeries, fit_floor: float = 0.05) -> tuple[float, float]:
    """Exponential decay rate of |g1| by least squares on the log magnitudes.

    Only points with |g1| above ``fit_floor`` enter the fit; the rate is
    positive for decay. Returns (rate, r_squared).
    """
    mags = series.magnitudes()
    mask = mags > fit_floor
    if int(mask.sum()) < 10:
        raise ValueError(
            f"too few usable points: {int(mask.sum())} above fit_floor = {fit_floor}"
        )
    x = series.lags[mask]
    y = np.log(mags[mask])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(y - y.mean(), y - y.mean()))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res < 1e-30 else 0.0)
    return float(-slope), r_squared


def ergodicity_metric(
    a: CorrelationSeries, b: CorrelationSeries, lag_max: float
) -> float:
    """Worst pointwise magnitude difference between two g1 estimates.

    Compares |a| and |b| on a's lag grid up to ``lag_max``; b is linearly
    interpolated when the grids differ.
    """
    mask = (a.lags <= lag_max) & (a.lags >= b.lags[0]) & (a.lags <= b.lags[-1])
    if not mask.any():
        raise ValueError("no overlapping lags up to lag_max")
    lags = a.lags[mask]
    mag_a = a.magnitudes()[mask]
    mag_b = np.interp(lags, b.lags, b.magnitudes())
    return float(np.max(np.abs(mag_a - mag_b)))
