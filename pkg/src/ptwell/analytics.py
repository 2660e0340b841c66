"""Closed-form thresholds and fixed-point values of the double-well model.

These are the analytic counterparts of the simulated dynamics: the pumping
threshold for condensate formation, the quasi-steady reservoir population,
the decay rate of a below-threshold seed, and the full self-organized
balanced fixed point that the system relaxes to above threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ModelParams

__all__ = [
    "SteadyStateSolution",
    "CoherenceUndefinedError",
    "threshold_pump",
    "reservoir_quasi_steady",
    "steady_state",
    "below_threshold_decay_rate",
]


class CoherenceUndefinedError(ValueError):
    """Raised when no real steady coherence exists for the given parameters.

    Happens when the pump imbalance is too large for the given ratio of
    polariton decay to tunnel coupling, making the fixed-point coherence
    magnitude imaginary.
    """


@dataclass(frozen=True)
class SteadyStateSolution:
    """Analytic fixed point of the pumped double well.

    Above threshold the condensate populations equalize (``pop`` is the
    common value), the reservoirs organize so that gain in one well mirrors
    loss in the other (``gamma`` is the left-well value, the right-well one
    is its negative), and the coherence components follow in closed form.
    Below threshold the trivial decayed solution is returned instead;
    ``gamma`` then holds the actual (non-balanced) left-well rate.

    ``re_theta`` is the non-negative branch; the dynamics selects the sign.
    """

    pop: float
    n_l: float
    n_r: float
    gamma: float
    im_theta: float
    re_theta: float
    above_threshold: bool


def threshold_pump(params: ModelParams) -> float:
    """Total pump rate at which the condensate starts to form: 2 kappa Gamma / R."""
    return 2.0 * params.kappa * params.gamma_x / params.r_scatter


def reservoir_quasi_steady(p: float, pop: float, params: ModelParams) -> float:
    """Stationary reservoir population P / (Gamma + R |psi|^2) at fixed condensate population."""
    if pop < 0:
        raise ValueError("pop must be non-negative")
    return p / (params.gamma_x + params.r_scatter * pop)


def steady_state(params: ModelParams) -> SteadyStateSolution:
    """Analytic steady state for degenerate wells and real coupling.

    Raises CoherenceUndefinedError when the fixed-point coherence has no
    real solution (pump imbalance too large relative to 2|J|/kappa).
    """
    if params.eps_l != params.eps_r:
        raise ValueError("steady_state assumes degenerate wells (eps_l == eps_r)")
    if not params.has_real_coupling:
        raise ValueError("steady_state assumes real j_coupling")

    p_l, p_r = params.p_l, params.p_r
    total = p_l + p_r
    kappa, gamma_x, r = params.kappa, params.gamma_x, params.r_scatter
    j = params.j_coupling.real

    if total < threshold_pump(params):
        n_l = p_l / gamma_x
        n_r = p_r / gamma_x
        gamma_l = 0.5 * (r * n_l - kappa)
        return SteadyStateSolution(
            pop=0.0,
            n_l=n_l,
            n_r=n_r,
            gamma=gamma_l,
            im_theta=0.0,
            re_theta=0.0,
            above_threshold=False,
        )

    pop = total / (2.0 * kappa) - gamma_x / r
    n_l = 2.0 * kappa * p_l / (r * total)
    n_r = 2.0 * kappa * p_r / (r * total)
    gamma = kappa * (p_l - p_r) / (2.0 * total)
    im_theta = kappa * gamma_x * (p_l - p_r) / (2.0 * r * j * total) - (p_l - p_r) / (4.0 * j)
    radicand = 4.0 * j * j * total * total - kappa * kappa * (p_l - p_r) ** 2
    if radicand < 0:
        raise CoherenceUndefinedError(
            "no real steady coherence: pump imbalance "
            f"{abs(p_l - p_r) / total:.4g} exceeds 2|J|/kappa = {2 * abs(j) / kappa:.4g}"
        )
    # prefactor uses kappa, not the balanced gain rate; only kappa is
    # consistent with |theta| = pop (checked in tests)
    prefactor = (total - 2.0 * kappa * gamma_x / r) / (4.0 * j * kappa * total)
    re_theta = prefactor * math.sqrt(radicand)
    return SteadyStateSolution(
        pop=pop,
        n_l=n_l,
        n_r=n_r,
        gamma=gamma,
        im_theta=im_theta,
        re_theta=re_theta,
        above_threshold=True,
    )


def below_threshold_decay_rate(params: ModelParams) -> float:
    """Population decay rate of a seed condensate pumped below threshold.

    Equals gamma_l + gamma_r with the reservoirs at their empty-condensate
    stationary values: (R / 2 Gamma)(P_l + P_r) - kappa, negative below
    threshold.
    """
    total = params.p_l + params.p_r
    if total >= threshold_pump(params):
        raise ValueError("defined only below the pumping threshold")
    return 0.5 * params.r_scatter / params.gamma_x * total - params.kappa
