"""Fixed-step time integration of the full model, with optional phase noise.

The deterministic part is advanced with the classical 4th-order explicit
scheme. Phase noise enters as Gaussian single-particle energies, mean zero
and variance 2 xi / noise_dt, redrawn every ``noise_dt`` and held constant
in between; each held energy is applied as an exact phase rotation
``psi <- psi * exp(-i eps dt)`` after the deterministic sub-step, so the
noise never feeds spurious gain or loss into the moduli.

A trajectory also carries the running integral of gamma_l + gamma_r,
accumulated by the same stepper stages, which the coherence decay law
relates to Re(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .model import ModelParams, SystemState

__all__ = [
    "NoiseConfig",
    "IntegrationConfig",
    "Trajectory",
    "DivergenceError",
    "sample_noise",
    "noise_sigma",
    "initial_state",
    "step",
    "integrate",
]

DEFAULT_DIVERGENCE_BOUND = 1e12


class DivergenceError(RuntimeError):
    """A condensate population exceeded the divergence bound (or went NaN)."""

    def __init__(self, time: float, realization: int | None = None):
        self.time = time
        self.realization = realization
        where = f" (realization {realization})" if realization is not None else ""
        super().__init__(f"population diverged at t = {time:.6g}{where}")


@dataclass(frozen=True)
class NoiseConfig:
    """Stochastic phase-noise settings.

    xi        decoherence rate; the held energies have variance 2 xi / noise_dt
    noise_dt  redraw interval for the random energies
    enabled   master switch; with xi = 0 the deterministic path is reproduced
              bit for bit
    """

    xi: float = 0.0
    noise_dt: float = 1e-3
    enabled: bool = False

    def __post_init__(self) -> None:
        if not self.xi >= 0:
            raise ValueError(f"xi must be >= 0, got {self.xi!r}")
        if not self.noise_dt > 0:
            raise ValueError(f"noise_dt must be > 0, got {self.noise_dt!r}")


@dataclass(frozen=True)
class IntegrationConfig:
    """Stepper and recording settings for a single run.

    ``n0_policy`` selects the initial reservoir populations: the default
    ``pump_over_gamma`` uses the empty-condensate stationary values P/Gamma,
    ``explicit`` takes ``n_l0``/``n_r0`` verbatim.
    """

    t_end: float
    dt: float = 1e-3
    record_stride: int = 1
    seed_amp_l: complex = 0.1 + 0.0j
    seed_amp_r: complex = 0.1 + 0.0j
    n0_policy: str = "pump_over_gamma"
    n_l0: float | None = None
    n_r0: float | None = None
    divergence_bound: float = DEFAULT_DIVERGENCE_BOUND

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt!r}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be > 0, got {self.t_end!r}")
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride!r}")
        if self.n0_policy not in ("pump_over_gamma", "explicit"):
            raise ValueError(f"unknown n0_policy {self.n0_policy!r}")
        if self.n0_policy == "explicit":
            if self.n_l0 is None or self.n_r0 is None:
                raise ValueError("n0_policy 'explicit' requires n_l0 and n_r0")
            if self.n_l0 < 0 or self.n_r0 < 0:
                raise ValueError("initial reservoir populations must be >= 0")
        if not self.divergence_bound > 0:
            raise ValueError("divergence_bound must be > 0")

    def n_steps(self) -> int:
        n = int(round(self.t_end / self.dt))
        if abs(n * self.dt - self.t_end) > 1e-9 * max(1.0, self.t_end):
            raise ValueError(
                f"t_end = {self.t_end!r} is not an integer number of steps of dt = {self.dt!r}"
            )
        if n % self.record_stride != 0:
            raise ValueError(
                f"step count {n} is not divisible by record_stride = {self.record_stride}"
            )
        return n


@dataclass(frozen=True)
class Trajectory:
    """Recorded time series of one integration run.

    Samples are uniformly spaced at ``record_stride * dt`` and include the
    initial state. ``gain_integral`` is the stepper-accumulated integral of
    gamma_l + gamma_r from t = 0 to each sample time. ``clamp_count`` counts
    reservoir populations clamped back to zero (coarse-step artifact).
    """

    times: np.ndarray
    psi_l: np.ndarray
    psi_r: np.ndarray
    n_l: np.ndarray
    n_r: np.ndarray
    gain_integral: np.ndarray
    rng_seed: int
    clamp_count: int
    dt: float
    record_stride: int

    def __len__(self) -> int:
        return len(self.times)

    @property
    def pop_l(self) -> np.ndarray:
        return np.abs(self.psi_l) ** 2

    @property
    def pop_r(self) -> np.ndarray:
        return np.abs(self.psi_r) ** 2

    @property
    def theta(self) -> np.ndarray:
        return self.psi_l * np.conj(self.psi_r)

    def state(self, i: int) -> SystemState:
        return SystemState(
            psi_l=complex(self.psi_l[i]),
            psi_r=complex(self.psi_r[i]),
            n_l=float(self.n_l[i]),
            n_r=float(self.n_r[i]),
            t=float(self.times[i]),
        )


def noise_sigma(noise: NoiseConfig) -> float:
    """Standard deviation of one held energy draw, sqrt(2 xi / noise_dt)."""
    return math.sqrt(2.0 * noise.xi / noise.noise_dt)


def sample_noise(rng: np.random.Generator, noise: NoiseConfig) -> tuple[float, float]:
    """Draw one pair of held single-particle energies for the two wells."""
    if not noise.enabled:
        raise ValueError("sample_noise requires noise.enabled")
    draw = noise_sigma(noise) * rng.standard_normal(2)
    return float(draw[0]), float(draw[1])


def initial_state(params: ModelParams, cfg: IntegrationConfig) -> SystemState:
    """Initial state from the seed amplitudes and the reservoir policy."""
    if cfg.n0_policy == "explicit":
        n_l0, n_r0 = float(cfg.n_l0), float(cfg.n_r0)
    else:
        n_l0 = params.p_l / params.gamma_x
        n_r0 = params.p_r / params.gamma_x
    return SystemState(
        psi_l=complex(cfg.seed_amp_l),
        psi_r=complex(cfg.seed_amp_r),
        n_l=n_l0,
        n_r=n_r0,
        t=0.0,
    )


@njit(cache=True, nogil=True)
def _rk4_kernel(
    psi_l: complex,
    psi_r: complex,
    n_l: float,
    n_r: float,
    g_int: float,
    eps_l: float,
    eps_r: float,
    eta: float,
    kappa: float,
    gamma_x: float,
    r_sc: float,
    j_re: float,
    j_im: float,
    p_l: float,
    p_r: float,
    dt: float,
    n_steps: int,
    stride: int,
    noise: np.ndarray,
    k_noise: int,
    use_noise: bool,
    bound: float,
    out_psi_l: np.ndarray,
    out_psi_r: np.ndarray,
    out_n_l: np.ndarray,
    out_n_r: np.ndarray,
    out_gint: np.ndarray,
):  # pragma: no cover - exercised through integrate/step
    j = complex(j_re, j_im)
    jc = np.conj(j)
    clamps = 0
    rec = 0
    for s in range(n_steps):
        if use_noise:
            idx = s // k_noise
            held_l = noise[idx, 0]
            held_r = noise[idx, 1]
            el = 0.0
            er = 0.0
        else:
            held_l = 0.0
            held_r = 0.0
            el = eps_l
            er = eps_r

        a_l = psi_l
        a_r = psi_r
        b_l = n_l
        b_r = n_r

        gl = 0.5 * (r_sc * b_l - kappa)
        gr = 0.5 * (r_sc * b_r - kappa)
        k1_pl = -1j * (el + eta * (a_l.real ** 2 + a_l.imag ** 2)) * a_l + gl * a_l + 1j * j * a_r
        k1_pr = -1j * (er + eta * (a_r.real ** 2 + a_r.imag ** 2)) * a_r + gr * a_r + 1j * jc * a_l
        k1_nl = p_l - gamma_x * b_l - r_sc * b_l * (a_l.real ** 2 + a_l.imag ** 2)
        k1_nr = p_r - gamma_x * b_r - r_sc * b_r * (a_r.real ** 2 + a_r.imag ** 2)
        k1_g = gl + gr

        a_l2 = a_l + 0.5 * dt * k1_pl
        a_r2 = a_r + 0.5 * dt * k1_pr
        b_l2 = b_l + 0.5 * dt * k1_nl
        b_r2 = b_r + 0.5 * dt * k1_nr
        gl = 0.5 * (r_sc * b_l2 - kappa)
        gr = 0.5 * (r_sc * b_r2 - kappa)
        k2_pl = -1j * (el + eta * (a_l2.real ** 2 + a_l2.imag ** 2)) * a_l2 + gl * a_l2 + 1j * j * a_r2
        k2_pr = -1j * (er + eta * (a_r2.real ** 2 + a_r2.imag ** 2)) * a_r2 + gr * a_r2 + 1j * jc * a_l2
        k2_nl = p_l - gamma_x * b_l2 - r_sc * b_l2 * (a_l2.real ** 2 + a_l2.imag ** 2)
        k2_nr = p_r - gamma_x * b_r2 - r_sc * b_r2 * (a_r2.real ** 2 + a_r2.imag ** 2)
        k2_g = gl + gr

        a_l3 = a_l + 0.5 * dt * k2_pl
        a_r3 = a_r + 0.5 * dt * k2_pr
        b_l3 = b_l + 0.5 * dt * k2_nl
        b_r3 = b_r + 0.5 * dt * k2_nr
        gl = 0.5 * (r_sc * b_l3 - kappa)
        gr = 0.5 * (r_sc * b_r3 - kappa)
        k3_pl = -1j * (el + eta * (a_l3.real ** 2 + a_l3.imag ** 2)) * a_l3 + gl * a_l3 + 1j * j * a_r3
        k3_pr = -1j * (er + eta * (a_r3.real ** 2 + a_r3.imag ** 2)) * a_r3 + gr * a_r3 + 1j * jc * a_l3
        k3_nl = p_l - gamma_x * b_l3 - r_sc * b_l3 * (a_l3.real ** 2 + a_l3.imag ** 2)
        k3_nr = p_r - gamma_x * b_r3 - r_sc * b_r3 * (a_r3.real ** 2 + a_r3.imag ** 2)
        k3_g = gl + gr

        a_l4 = a_l + dt * k3_pl
        a_r4 = a_r + dt * k3_pr
        b_l4 = b_l + dt * k3_nl
        b_r4 = b_r + dt * k3_nr
        gl = 0.5 * (r_sc * b_l4 - kappa)
        gr = 0.5 * (r_sc * b_r4 - kappa)
        k4_pl = -1j * (el + eta * (a_l4.real ** 2 + a_l4.imag ** 2)) * a_l4 + gl * a_l4 + 1j * j * a_r4
        k4_pr = -1j * (er + eta * (a_r4.real ** 2 + a_r4.imag ** 2)) * a_r4 + gr * a_r4 + 1j * jc * a_l4
        k4_nl = p_l - gamma_x * b_l4 - r_sc * b_l4 * (a_l4.real ** 2 + a_l4.imag ** 2)
        k4_nr = p_r - gamma_x * b_r4 - r_sc * b_r4 * (a_r4.real ** 2 + a_r4.imag ** 2)
        k4_g = gl + gr

        psi_l = a_l + dt / 6.0 * (k1_pl + 2.0 * (k2_pl + k3_pl) + k4_pl)
        psi_r = a_r + dt / 6.0 * (k1_pr + 2.0 * (k2_pr + k3_pr) + k4_pr)
        n_l = b_l + dt / 6.0 * (k1_nl + 2.0 * (k2_nl + k3_nl) + k4_nl)
        n_r = b_r + dt / 6.0 * (k1_nr + 2.0 * (k2_nr + k3_nr) + k4_nr)
        g_int = g_int + dt / 6.0 * (k1_g + 2.0 * (k2_g + k3_g) + k4_g)

        if use_noise:
            psi_l = psi_l * np.exp(-1j * held_l * dt)
            psi_r = psi_r * np.exp(-1j * held_r * dt)

        if n_l < 0.0:
            n_l = 0.0
            clamps += 1
        if n_r < 0.0:
            n_r = 0.0
            clamps += 1

        pop_l = psi_l.real ** 2 + psi_l.imag ** 2
        pop_r = psi_r.real ** 2 + psi_r.imag ** 2
        if pop_l > bound or pop_r > bound or np.isnan(pop_l) or np.isnan(pop_r):
            return s, clamps, psi_l, psi_r, n_l, n_r, g_int

        if (s + 1) % stride == 0:
            out_psi_l[rec] = psi_l
            out_psi_r[rec] = psi_r
            out_n_l[rec] = n_l
            out_n_r[rec] = n_r
            out_gint[rec] = g_int
            rec += 1

    return -1, clamps, psi_l, psi_r, n_l, n_r, g_int


_EMPTY_NOISE = np.zeros((1, 2))


def step(
    state: SystemState,
    params: ModelParams,
    dt: float,
    eps_l_inst: float,
    eps_r_inst: float,
    stochastic: bool = False,
    divergence_bound: float = DEFAULT_DIVERGENCE_BOUND,
) -> SystemState:
    """Advance the state by one step of size ``dt``.

    Deterministic mode feeds the instantaneous energies into the stepper
    stages directly (plain 4th order). Stochastic mode treats them as held
    noise draws: the stages see zero energy and the draw is applied as an
    exact phase rotation afterwards.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    out = tuple(np.empty(1, dtype=k) for k in (np.complex128, np.complex128, np.float64, np.float64, np.float64))
    if stochastic:
        noise = np.array([[eps_l_inst, eps_r_inst]], dtype=np.float64)
        el = er = 0.0
    else:
        noise = _EMPTY_NOISE
        el, er = eps_l_inst, eps_r_inst
    status, _, psi_l, psi_r, n_l, n_r, _ = _rk4_kernel(
        complex(state.psi_l), complex(state.psi_r), float(state.n_l), float(state.n_r), 0.0,
        el, er,
        params.eta, params.kappa, params.gamma_x, params.r_scatter,
        params.j_coupling.real, params.j_coupling.imag, params.p_l, params.p_r,
        dt, 1, 1, noise, 1, stochastic, divergence_bound,
        *out,
    )
    if status >= 0:
        raise DivergenceError(state.t + dt)
    return SystemState(psi_l=psi_l, psi_r=psi_r, n_l=n_l, n_r=n_r, t=state.t + dt)


def integrate(
    initial: SystemState,
    params: ModelParams,
    cfg: IntegrationConfig,
    noise: NoiseConfig | None = None,
    seed: int = 0,
) -> Trajectory:
    """Integrate the full model from ``initial`` to ``cfg.t_end``.

    The seed fully determines the noise stream: identical (seed, config)
    inputs give bit-identical trajectories. With noise disabled, or enabled
    at xi = 0, the run is purely deterministic.
    """
    if noise is None:
        noise = NoiseConfig()
    n_steps = cfg.n_steps()
    dt = cfg.dt

    use_noise = noise.enabled and noise.xi > 0
    if noise.enabled:
        if dt > noise.noise_dt * (1 + 1e-12):
            raise ValueError(
                f"dt = {dt!r} must not exceed noise_dt = {noise.noise_dt!r}"
            )
        k_noise = max(1, int(round(noise.noise_dt / dt)))
        if abs(k_noise * dt - noise.noise_dt) > 1e-9 * noise.noise_dt:
            raise ValueError(
                f"noise_dt = {noise.noise_dt!r} must be an integer multiple of dt = {dt!r}"
            )
    else:
        k_noise = 1
    if use_noise and (params.eps_l != 0.0 or params.eps_r != 0.0):
        raise ValueError(
            "phase noise replaces the static single-particle energies; "
            "set eps_l = eps_r = 0 when noise is enabled"
        )

    if use_noise:
        n_draws = -(-n_steps // k_noise)  # ceil
        rng = np.random.default_rng(seed)
        draws = noise_sigma(noise) * rng.standard_normal((n_draws, 2))
    else:
        draws = _EMPTY_NOISE

    n_rec = n_steps // cfg.record_stride
    out_psi_l = np.empty(n_rec, dtype=np.complex128)
    out_psi_r = np.empty(n_rec, dtype=np.complex128)
    out_n_l = np.empty(n_rec, dtype=np.float64)
    out_n_r = np.empty(n_rec, dtype=np.float64)
    out_gint = np.empty(n_rec, dtype=np.float64)

    status, clamps, *_ = _rk4_kernel(
        complex(initial.psi_l), complex(initial.psi_r),
        float(initial.n_l), float(initial.n_r), 0.0,
        params.eps_l, params.eps_r,
        params.eta, params.kappa, params.gamma_x, params.r_scatter,
        params.j_coupling.real, params.j_coupling.imag, params.p_l, params.p_r,
        dt, n_steps, cfg.record_stride, draws, k_noise, use_noise,
        cfg.divergence_bound,
        out_psi_l, out_psi_r, out_n_l, out_n_r, out_gint,
    )
    if status >= 0:
        raise DivergenceError((status + 1) * dt)

    times = np.arange(n_rec + 1, dtype=np.float64) * (cfg.record_stride * dt)
    return Trajectory(
        times=times,
        psi_l=np.concatenate(([complex(initial.psi_l)], out_psi_l)),
        psi_r=np.concatenate(([complex(initial.psi_r)], out_psi_r)),
        n_l=np.concatenate(([float(initial.n_l)], out_n_l)),
        n_r=np.concatenate(([float(initial.n_r)], out_n_r)),
        gain_integral=np.concatenate(([0.0], out_gint)),
        rng_seed=seed,
        clamp_count=int(clamps),
        dt=dt,
        record_stride=cfg.record_stride,
    )
