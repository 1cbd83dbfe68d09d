"""Effective interface couplings and concrete Hamiltonian matrices.

The wire splitting evaluated at the working phase ``phi_c + f1`` yields the
topological-qubit frequency ``omega_t``; its phase derivative, weighted by
the circuit's flux response, gives the two switchable couplings

    lambda1 = eta * sin(phi_e/2) * dE/dphi      (qubit-qubit interface)
    lambda2 = eta * g * cos(phi_e/2) * dE/dphi  (qubit-cavity interface)

so lambda1 vanishes identically at phi_e = 0 and lambda2 at phi_e = pi.  The
half-angle factors are evaluated so those zeros are exact in floating point.

Hilbert-space layout for two-qubit configurations is qubit (x) qubit (x)
cavity, with the cavity truncated at ``fock_cutoff`` Fock states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

import numpy as np

from . import circuit as _circuit
from .circuit import CircuitParams, EffectiveQubit, effective_qubit
from .qcore import SIGMA_X, SIGMA_Z, destroy, eye, number_op, tensor
from .wire import WireParams, splitting_derivative, wire_splitting

__all__ = [
    "CouplingSet",
    "HamiltonianModel",
    "build_H_CT",
    "build_H_I",
    "build_H_single_interface",
    "couplings",
    "optimal_working_point",
]

# The coupling magnitudes grow monotonically as phi_c approaches the cusp of
# E(phi) at phi = 0, where the derivative itself vanishes by symmetry.  The
# working-point search therefore runs on a closed interval that stops one
# grid step short of the cusp.
PHI_C_MIN = 1e-3


@dataclass(frozen=True)
class CouplingSet:
    """Derived interface couplings at a fixed working point (rad/s)."""

    omega_t: float
    lambda1: float
    lambda2: float
    working_phi: float
    effective: Optional[EffectiveQubit] = None

    @classmethod
    def pinned(
        cls, lambda2: float, lambda1: float = 0.0, omega_t: float = 0.0
    ) -> "CouplingSet":
        """A coupling set with directly specified values (no circuit model).

        Used when the coupling strength is an input rather than derived from
        device parameters, e.g. for preset gate simulations.
        """
        return cls(
            omega_t=omega_t, lambda1=lambda1, lambda2=lambda2,
            working_phi=float("nan"), effective=None,
        )


@dataclass(frozen=True)
class HamiltonianModel:
    """Hilbert-space layout and cavity parameters for two-qubit dynamics.

    dims are (2, 2, fock_cutoff); ``nu`` is the drive detuning omega_r - omega
    entering the interaction-picture Hamiltonian and must be positive.
    """

    fock_cutoff: int = 16
    nu: float = 0.0
    omega_r: float = 0.0

    def __post_init__(self):
        if self.fock_cutoff < 8:
            raise ValueError("fock_cutoff must be at least 8")

    @property
    def dims(self) -> tuple[int, int, int]:
        return (2, 2, self.fock_cutoff)

    @property
    def dim(self) -> int:
        return 4 * self.fock_cutoff

    @cached_property
    def a_op(self) -> np.ndarray:
        return tensor([eye(2), eye(2), destroy(self.fock_cutoff)])

    @cached_property
    def n_photon(self) -> np.ndarray:
        return tensor([eye(2), eye(2), number_op(self.fock_cutoff)])

    @cached_property
    def tau1_z(self) -> np.ndarray:
        return tensor([SIGMA_Z, eye(2), eye(self.fock_cutoff)])

    @cached_property
    def tau2_z(self) -> np.ndarray:
        return tensor([eye(2), SIGMA_Z, eye(self.fock_cutoff)])

    @cached_property
    def j_z(self) -> np.ndarray:
        return 0.5 * (self.tau1_z + self.tau2_z)

    @cached_property
    def a_j_z(self) -> np.ndarray:
        return self.a_op @ self.j_z


def couplings(wire: WireParams, circ: CircuitParams) -> CouplingSet:
    """Interface couplings from device parameters.

    Evaluates the wire splitting and its derivative at the working phase
    ``phi_c + f1`` and applies the flux-response prefactors.
    """
    eff = effective_qubit(circ)
    working_phi = circ.phi_c + eff.f1
    split = wire_splitting(wire, working_phi)
    de_dphi = splitting_derivative(wire, working_phi)
    eta = circ.eta
    lam1 = eta * _circuit._half_angle_sin(circ.phi_e) * de_dphi
    lam2 = eta * circ.g * _circuit._half_angle_cos(circ.phi_e) * de_dphi
    return CouplingSet(
        omega_t=split.E,
        lambda1=lam1,
        lambda2=lam2,
        working_phi=working_phi,
        effective=eff,
    )


def _golden_section_max(f, lo, hi, tol=1e-8, max_iter=200):
    """Golden-section search for the maximum of f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def optimal_working_point(
    wire: WireParams,
    circ: CircuitParams,
    which: str,
    grid_step: float = 1e-3,
) -> tuple[float, float]:
    """Working phase phi_c maximizing |lambda1| or |lambda2|.

    Scans phi_c over [PHI_C_MIN, pi - PHI_C_MIN] at ``grid_step`` resolution,
    then refines around the best grid point by golden-section search to 1e-8.
    Returns (phi_c, coupling value at phi_c).
    """
    if which not in ("lambda1", "lambda2"):
        raise ValueError("which must be 'lambda1' or 'lambda2'")

    def coupling_at(phi_c: float) -> float:
        cs = couplings(wire, replace(circ, phi_c=phi_c))
        return getattr(cs, which)

    lo, hi = PHI_C_MIN, math.pi - PHI_C_MIN
    grid = np.arange(lo, hi + 0.5 * grid_step, grid_step)
    values = np.array([abs(coupling_at(p)) for p in grid])
    best = int(np.argmax(values))
    a = grid[best - 1] if best > 0 else lo
    b = grid[best + 1] if best < len(grid) - 1 else hi
    phi_best, _ = _golden_section_max(lambda p: abs(coupling_at(p)), a, b, tol=1e-8)
    candidates = [(abs(coupling_at(p)), p) for p in (phi_best, grid[best])]
    _, phi_c = max(candidates)
    return float(phi_c), coupling_at(float(phi_c))


def build_H_CT(cs: CouplingSet, model: HamiltonianModel) -> np.ndarray:
    """Lab-frame Hamiltonian of two identical qubits coupled to the cavity.

    H = omega_r a+a - (omega_t + lambda1)/2 * (tau1_z + tau2_z)
        - lambda2 * (tau1_z + tau2_z) * (a + a+)
    """
    tau_sum = model.tau1_z + model.tau2_z
    quad = model.a_op + model.a_op.conj().T
    return (
        model.omega_r * model.n_photon
        - 0.5 * (cs.omega_t + cs.lambda1) * tau_sum
        - cs.lambda2 * (tau_sum @ quad)
    )


def build_H_I(cs: CouplingSet, model: HamiltonianModel, t: float) -> np.ndarray:
    """Interaction-picture Hamiltonian -lambda2 (a e^{-i nu t} + h.c.) J_z."""
    if model.nu <= 0:
        raise ValueError("the interaction picture requires detuning nu > 0")
    a_jz = model.a_j_z
    phase = np.exp(-1j * model.nu * t)
    return -cs.lambda2 * (phase * a_jz + np.conj(phase) * a_jz.conj().T)


def build_H_single_interface(cs: CouplingSet) -> np.ndarray:
    """Qubit-qubit interface Hamiltonian -(lambda1/2) sigma_x tau_z.

    Acts on superconducting (x) topological qubit space (4x4); valid at the
    lambda2 = 0 working point.
    """
    return -0.5 * cs.lambda1 * tensor([SIGMA_X, SIGMA_Z])
