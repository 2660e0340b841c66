"""Two-mode model of a pumped polariton condensate in a double well.

Value types for the physical constants and the instantaneous state, the
coupled-mode right-hand sides in two equivalent representations (complex
amplitudes and population/coherence), and small derived observables.

Conventions: all energies and rates are expressed in units of the Josephson
coupling magnitude, time in its inverse. The amplitude equations are stored
in explicit first-order form, i.e. the returned derivative satisfies
``i * d_psi/dt = (conventional rhs)``, so a plain real-time stepper can
consume it directly.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ModelParams",
    "SystemState",
    "Coherence",
    "StateDerivative",
    "coherence",
    "gain_rates",
    "rhs_full",
    "pop_coherence_rhs",
    "pt_residual",
]


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the double-well condensate model.

    kappa      polariton decay rate (same in both wells), > 0
    gamma_x    reservoir exciton decay rate, > 0
    r_scatter  reservoir-to-condensate scattering rate, > 0
    p_l, p_r   laser pump rates into the left/right reservoir, >= 0
    eps_l/r    static single-particle energies of the wells
    eta        nonlinear interaction strength
    j_coupling Josephson tunnel coupling between the wells (complex allowed)
    """

    kappa: float
    gamma_x: float
    r_scatter: float
    p_l: float
    p_r: float
    eps_l: float = 0.0
    eps_r: float = 0.0
    eta: float = 0.0
    j_coupling: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        for name in ("kappa", "gamma_x", "r_scatter"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)!r}")
        for name in ("p_l", "p_r"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        object.__setattr__(self, "j_coupling", complex(self.j_coupling))
        if not abs(self.j_coupling) > 0:
            raise ValueError("j_coupling must have nonzero magnitude")

    @property
    def has_real_coupling(self) -> bool:
        return self.j_coupling.imag == 0.0


@dataclass(frozen=True)
class SystemState:
    """Instantaneous state: two condensate amplitudes, two reservoir populations."""

    psi_l: complex
    psi_r: complex
    n_l: float
    n_r: float
    t: float = 0.0

    @property
    def pop_l(self) -> float:
        return abs(self.psi_l) ** 2

    @property
    def pop_r(self) -> float:
        return abs(self.psi_r) ** 2


@dataclass(frozen=True)
class Coherence:
    """Inter-well correlator theta = psi_l * conj(psi_r)."""

    theta: complex


@dataclass(frozen=True)
class StateDerivative:
    """Carrier for the instantaneous time derivatives of a SystemState."""

    d_psi_l: complex
    d_psi_r: complex
    d_n_l: float
    d_n_r: float


def coherence(state: SystemState) -> Coherence:
    return Coherence(state.psi_l * state.psi_r.conjugate())


def gain_rates(n_l: float, n_r: float, params: ModelParams) -> tuple[float, float]:
    """Net amplification rates of the two condensate modes.

    gamma = (R n - kappa) / 2: positive means gain, negative means loss.
    """
    gamma_l = 0.5 * (params.r_scatter * n_l - params.kappa)
    gamma_r = 0.5 * (params.r_scatter * n_r - params.kappa)
    return gamma_l, gamma_r


def rhs_full(
    state: SystemState,
    params: ModelParams,
    eps_l_inst: float,
    eps_r_inst: float,
) -> StateDerivative:
    """Time derivatives of the full coupled model at one instant.

    ``eps_*_inst`` are the instantaneous single-particle energies (the static
    model values, or held noise draws); they take the place of the static
    energies entirely. The i is moved to the right-hand side: the returned
    ``d_psi`` satisfies ``i * d_psi = (energy + gain/loss + coupling) psi``.
    """
    psi_l, psi_r = state.psi_l, state.psi_r
    pop_l = psi_l.real * psi_l.real + psi_l.imag * psi_l.imag
    pop_r = psi_r.real * psi_r.real + psi_r.imag * psi_r.imag
    gamma_l, gamma_r = gain_rates(state.n_l, state.n_r, params)
    j = params.j_coupling

    d_psi_l = (
        -1j * (eps_l_inst + params.eta * pop_l) * psi_l
        + gamma_l * psi_l
        + 1j * j * psi_r
    )
    d_psi_r = (
        -1j * (eps_r_inst + params.eta * pop_r) * psi_r
        + gamma_r * psi_r
        + 1j * j.conjugate() * psi_l
    )
    d_n_l = params.p_l - params.gamma_x * state.n_l - params.r_scatter * state.n_l * pop_l
    d_n_r = params.p_r - params.gamma_x * state.n_r - params.r_scatter * state.n_r * pop_r
    return StateDerivative(d_psi_l, d_psi_r, d_n_l, d_n_r)


def pop_coherence_rhs(
    pop_l: float,
    pop_r: float,
    theta: complex,
    gamma_l: float,
    gamma_r: float,
    params: ModelParams,
) -> tuple[float, float, complex]:
    """Right-hand sides in the population/coherence representation.

    Valid only for real Josephson coupling; the reformulated equations do
    not hold for complex J, so that case is rejected outright.
    """
    if not params.has_real_coupling:
        raise ValueError(
            "pop_coherence_rhs requires real j_coupling; "
            f"got {params.j_coupling!r}"
        )
    if pop_l < 0 or pop_r < 0:
        raise ValueError("populations must be non-negative")
    j = params.j_coupling.real
    theta = complex(theta)

    d_pop_l = 2.0 * gamma_l * pop_l + 2.0 * j * theta.imag
    d_pop_r = 2.0 * gamma_r * pop_r - 2.0 * j * theta.imag
    d_theta = (
        -1j * (params.eps_l - params.eps_r + params.eta * (pop_l - pop_r)) * theta
        + (gamma_l + gamma_r) * theta
        - 1j * j * (pop_l - pop_r)
    )
    return d_pop_l, d_pop_r, d_theta


def pt_residual(state: SystemState, params: ModelParams) -> float:
    """Distance from the balanced gain/loss condition, R(n_l + n_r) - 2 kappa.

    Zero exactly when the reservoirs satisfy the parity-time balance, which
    is also the stationarity condition of the coherence equation.
    """
    return params.r_scatter * (state.n_l + state.n_r) - 2.0 * params.kappa
