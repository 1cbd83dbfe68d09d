"""Effective two-level reduction of the three-junction charge-qubit loop.

The loop carries two identical small junctions (energy E_J) and one large
junction (E_J0 >> E_J), threaded by an external flux phase ``phi_e`` plus a
cavity-induced contribution ``2*g*(a + a+)``.  The supercurrent constraint

    sin(phi_J) = 2*eta * sin(beta) * cos(phi),    2*beta = phi_e - phi_J + 2*g*p

fixes the large-junction phase drop ``phi_J`` (eta = E_J/E_J0, ``p`` the
c-number photon amplitude standing in for a + a+).  Expanding to second order
in eta gives the closed-form series used throughout; ``phi_J_exact`` solves
the constraint without expansion for validation.

At the gate-charge degeneracy point the island reduces to a two-level system
with gap ``E_J_bar`` and qubit-cavity coupling ``xi``; the phase seen by the
attached wire splits into ``eps_plus``/``eps_minus`` depending on the qubit
state.  Energies are angular frequencies (rad/s); phases are radians.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal
from scipy.optimize import brentq

from .qcore import ConvergenceError

__all__ = [
    "CircuitParams",
    "EffectiveQubit",
    "charge_basis_oracle",
    "effective_qubit",
    "phi_J_exact",
    "phi_J_series",
    "tunneling_leakage",
]


def _half_angle_sin(phi: float) -> float:
    """sin(phi/2), exactly zero at phi = 0."""
    return math.sin(0.5 * phi)


def _half_angle_cos(phi: float) -> float:
    """cos(phi/2), evaluated as sin((pi - phi)/2) so it is exactly zero at phi = pi."""
    return math.sin(0.5 * (math.pi - phi))


@dataclass(frozen=True)
class CircuitParams:
    """Charge-qubit loop parameters.

    E_J, E_J0 : small/large junction energies (rad/s); eta = E_J/E_J0 < 0.3
    E_c : island charging energy (rad/s)
    n_g : gate charge; the two-level reduction assumes the degeneracy point 1/2
    g : dimensionless cavity-loop magnetic coupling
    phi_e : external flux phase (rad)
    phi_c : controller-fixed phase offset seen by the wire (rad)
    omega_r : cavity frequency (rad/s)
    """

    E_J: float
    E_J0: float
    E_c: float
    n_g: float = 0.5
    g: float = 0.01
    phi_e: float = 0.0
    phi_c: float = 0.0
    omega_r: float = 0.0

    def __post_init__(self):
        if self.E_J <= 0 or self.E_J0 <= 0:
            raise ValueError("junction energies must be positive")
        if self.eta >= 0.3:
            raise ValueError(
                f"eta = E_J/E_J0 = {self.eta:.3f} >= 0.3: series reduction invalid"
            )
        if self.E_J >= self.E_c:
            warnings.warn(
                "E_J >= E_c: outside the charging regime of the two-level reduction",
                stacklevel=2,
            )
        if self.n_g != 0.5:
            warnings.warn(
                f"n_g = {self.n_g} is away from the degeneracy point 1/2",
                stacklevel=2,
            )

    @property
    def eta(self) -> float:
        return self.E_J / self.E_J0


@dataclass(frozen=True)
class EffectiveQubit:
    """Derived two-level parameters and wire phase shifts.

    f3_coeff multiplies the photon amplitude (a + a+) in the qubit-state
    dependent shift; eps_plus/eps_minus are quoted at zero photons, so
    eps_plus - eps_minus = 2*f2.
    """

    E_J_bar: float
    xi: float
    f1: float
    f2: float
    f3_coeff: float
    eps_plus: float
    eps_minus: float


def _full_angle_sin(phi: float) -> float:
    """sin(phi) via the half-angle product, exactly zero at phi = 0 and pi."""
    return 2.0 * _half_angle_sin(phi) * _half_angle_cos(phi)


def phi_J_series(params: CircuitParams, phi: float, photon_amp: float = 0.0) -> float:
    """Large-junction phase drop to second order in eta."""
    eta = params.eta
    c = math.cos(phi)
    return (
        2.0 * eta * _half_angle_sin(params.phi_e) * c
        - eta**2 * _full_angle_sin(params.phi_e) * c * c
        + 2.0 * params.g * eta * _half_angle_cos(params.phi_e) * c * photon_amp
    )


def phi_J_exact(params: CircuitParams, phi: float, photon_amp: float = 0.0) -> float:
    """Self-consistent large-junction phase drop.

    Solves sin(x) = 2*eta*sin((phi_e - x)/2 + g*p)*cos(phi) for the unique
    root in (-pi/2, pi/2); the residual is verified below 1e-12.
    """
    eta = params.eta
    if eta == 0.0:
        return 0.0
    shift = 0.5 * params.phi_e + params.g * photon_amp
    cphi = math.cos(phi)

    def constraint(x: float) -> float:
        return math.sin(x) - 2.0 * eta * math.sin(shift - 0.5 * x) * cphi

    lo, hi = -0.5 * math.pi, 0.5 * math.pi
    f_lo, f_hi = constraint(lo), constraint(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise ConvergenceError(
            "no sign change of the current constraint in (-pi/2, pi/2); "
            "parameter regime breakdown"
        )
    root = brentq(constraint, lo, hi, xtol=1e-15, rtol=8.9e-16)
    if abs(constraint(root)) > 1e-12:
        raise ConvergenceError("current-constraint residual above 1e-12")
    return float(root)


def effective_qubit(params: CircuitParams) -> EffectiveQubit:
    """Two-level parameters at the degeneracy point, to second order in eta."""
    eta = params.eta
    s = _half_angle_sin(params.phi_e)
    c = _half_angle_cos(params.phi_e)
    e_j_bar = 2.0 * params.E_J * c * (1.0 - 0.375 * eta**2 * s * s)
    xi = params.g * params.E_J * s
    f1 = -0.25 * eta**2 * _full_angle_sin(params.phi_e)
    f2 = eta * s
    f3_coeff = eta * params.g * c
    return EffectiveQubit(
        E_J_bar=e_j_bar,
        xi=xi,
        f1=f1,
        f2=f2,
        f3_coeff=f3_coeff,
        eps_plus=params.phi_c + f1 + f2,
        eps_minus=params.phi_c + f1 - f2,
    )


def charge_basis_oracle(params: CircuitParams, n_max: int = 10) -> float:
    """Gap of the truncated charge-basis island Hamiltonian.

    Diagonalizes E_c*(n - n_g)^2 - E_J_bar*cos(phi) with cos(phi) represented
    as symmetric nearest-neighbour hopping of amplitude 1/2 over charge states
    n in [-n_max, n_max].  In the charging regime the gap between the two
    lowest levels approaches the effective two-level splitting E_J_bar.
    Raises ConvergenceError if the gap has not converged to 1e-6 relative
    between truncations n_max and n_max + 2.
    """
    if params.n_g != 0.5:
        raise ValueError("the charge-basis oracle assumes the degeneracy point n_g = 1/2")
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    e_j_bar = effective_qubit(params).E_J_bar

    def gap(m: int) -> float:
        n = np.arange(-m, m + 1, dtype=float)
        diag = params.E_c * (n - params.n_g) ** 2
        off = np.full(2 * m, -0.5 * e_j_bar)
        levels = eigvalsh_tridiagonal(diag, off, select="i", select_range=(0, 1))
        return float(levels[1] - levels[0])

    g1, g2 = gap(n_max), gap(n_max + 2)
    if abs(g1 - g2) > 1e-6 * max(abs(g2), 1e-12 * params.E_c):
        raise ConvergenceError(
            f"charge-basis gap not converged: {g1!r} vs {g2!r} at n_max={n_max}"
        )
    return g1


def tunneling_leakage(lambda1: float, params: CircuitParams) -> float:
    """Probability of unwanted qubit-state tunneling, (lambda1 / (2*E_J))^2."""
    ratio = lambda1 / (2.0 * params.E_J)
    p_t = ratio * ratio
    if abs(ratio) >= 0.5:
        warnings.warn(
            f"lambda1/(2*E_J) = {ratio:.3f}: two-level suppression regime invalid",
            stacklevel=2,
        )
    return p_t
