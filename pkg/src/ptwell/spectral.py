"""Non-Hermitian two-mode analysis of the balanced gain/loss double well.

Closed-form eigenvalues and eigenvectors of the 2x2 matrix
``[[i gamma, -J], [-J*, -i gamma]]``, phase classification against the
exceptional point at gamma = |J|, and a bifurcation scan over gamma.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TwoModeHamiltonian",
    "PTPhase",
    "PhaseClassification",
    "BifurcationScan",
    "eigensystem",
    "classify_phase",
    "bifurcation_scan",
]


@dataclass(frozen=True)
class TwoModeHamiltonian:
    """Balanced gain/loss two-mode Hamiltonian."""

    gamma: float
    j_coupling: complex

    def matrix(self) -> np.ndarray:
        g, j = self.gamma, complex(self.j_coupling)
        return np.array([[1j * g, -j], [-j.conjugate(), -1j * g]], dtype=np.complex128)


class PTPhase(enum.Enum):
    PT_SYMMETRIC = "pt_symmetric"
    EXCEPTIONAL_POINT = "exceptional_point"
    PT_BROKEN = "pt_broken"


@dataclass(frozen=True)
class PhaseClassification:
    phase: PTPhase
    tolerance: float


@dataclass(frozen=True)
class BifurcationScan:
    """Eigenvalue branches over a uniform gamma grid at fixed coupling."""

    gammas: np.ndarray
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    j_coupling: complex


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Normalize to unit length with the first nonzero component real-positive."""
    v = v / np.linalg.norm(v)
    for comp in v:
        if comp != 0:
            v = v * (abs(comp) / comp)
            break
    return v


def eigensystem(
    gamma: float, j: complex
) -> tuple[complex, complex, np.ndarray, np.ndarray]:
    """Closed-form eigenvalues and unit eigenvectors of the two-mode matrix.

    lambda_pm = pm sqrt(|J|^2 - gamma^2): real in the symmetric phase,
    purely imaginary (principal branch, Im lambda_plus >= 0) beyond the
    exceptional point, where the two eigenvectors coalesce.
    """
    j = complex(j)
    if not abs(j) > 0:
        raise ValueError("coupling must be nonzero")
    lam = cmath.sqrt(abs(j) ** 2 - gamma * gamma)
    v_plus = _fix_phase(np.array([lam + 1j * gamma, -j.conjugate()], dtype=np.complex128))
    v_minus = _fix_phase(np.array([-lam + 1j * gamma, -j.conjugate()], dtype=np.complex128))
    return lam, -lam, v_plus, v_minus


def classify_phase(
    gamma: float, j: complex, tol: float | None = None
) -> PhaseClassification:
    """Classify against the exceptional point at gamma = |J|.

    The default boundary band is 1e-9 |J|.
    """
    mag = abs(complex(j))
    if tol is None:
        tol = 1e-9 * mag
    if not tol > 0:
        raise ValueError("tol must be > 0")
    if abs(gamma - mag) <= tol:
        phase = PTPhase.EXCEPTIONAL_POINT
    elif gamma < mag:
        phase = PTPhase.PT_SYMMETRIC
    else:
        phase = PTPhase.PT_BROKEN
    return PhaseClassification(phase=phase, tolerance=tol)


def bifurcation_scan(
    gamma_min: float, gamma_max: float, steps: int, j: complex
) -> BifurcationScan:
    """Eigenvalue branches on a uniform grid gamma in [gamma_min, gamma_max]."""
    if not gamma_min < gamma_max:
        raise ValueError("gamma_min must be < gamma_max")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    gammas = np.linspace(gamma_min, gamma_max, steps)
    lam = np.sqrt((abs(complex(j)) ** 2 - gammas * gammas).astype(np.complex128))
    return BifurcationScan(
        gammas=gammas, lambda_plus=lam, lambda_minus=-lam, j_coupling=complex(j)
    )
