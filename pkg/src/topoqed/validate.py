"""Fast self-check suite: one pass/fail entry per invariant group.

Each group re-derives a handful of the package's load-bearing identities in
seconds.  The ``gate-phase-sign`` mutation deliberately corrupts the sign of
the accumulated gate phase while the propagator-oracle group runs, to
demonstrate that the direct-integration oracle actually detects a seeded
defect (the group must then fail).
"""

from __future__ import annotations

import math
import time
from dataclasses import replace

import numpy as np

from . import dynamics as _dyn
from .circuit import CircuitParams, effective_qubit, phi_J_exact, phi_J_series
from .dynamics import GateSchedule, ideal_gate_state, propagator_AB
from .interface import CouplingSet, HamiltonianModel, build_H_CT, build_H_I, couplings
from .qcore import (
    LindbladSpec,
    QuantumState,
    basis_state,
    destroy,
    expm_hermitian,
    integrate_master_equation,
    number_op,
    partial_trace,
    state_fidelity,
)
from .wire import WireParams, inverse_x_over_tan, wire_splitting

__all__ = ["MUTATIONS", "run_validation"]

MUTATIONS = ("gate-phase-sign",)

_PAPER_WIRE = dict(v_F=1e5, L=5e-6, Delta0=2 * math.pi * 32e9, W=1e-7, T=0.02)
_PAPER_CIRCUIT = dict(
    E_J=2 * math.pi * 16e9,
    E_J0=2 * math.pi * 160e9,
    E_c=2 * math.pi * 160e9,
    g=0.01,
    phi_c=0.5,
    omega_r=2 * math.pi * 6e9,
)


def _check_schedule_algebra() -> tuple[bool, str]:
    worst_a, worst_b = 0.0, 0.0
    for k in (1, 4, 9):
        sch = GateSchedule(k=k, lambda2=2 * math.pi * 32e6)
        a, b = propagator_AB(sch.lambda2, sch.nu, sch.tau)
        worst_a = max(worst_a, abs(a + math.pi / 2))
        worst_b = max(worst_b, abs(b))
        if abs(sch.nu * sch.tau - 2 * math.pi * k) > 1e-12 * k:
            return False, f"loop closure violated at k={k}"
    ok = worst_a <= 1e-12 and worst_b <= 1e-14
    return ok, f"max |A(tau)+pi/2| = {worst_a:.2e}, max |B(tau)| = {worst_b:.2e}"


def _check_propagator_periodicity() -> tuple[bool, str]:
    lam2 = 2 * math.pi * 32e6
    nu = 2 * lam2
    worst_zero = max(
        abs(propagator_AB(lam2, nu, 2 * math.pi * m / nu)[1]) for m in range(1, 11)
    )
    bound = 2 * lam2 / nu
    offenders = [
        abs(propagator_AB(lam2, nu, t)[1]) - bound
        for t in np.linspace(0.0, 20.0 / nu, 400)
    ]
    at_half = abs(propagator_AB(lam2, nu, math.pi / nu)[1])
    ok = (
        worst_zero <= 1e-14
        and max(offenders) <= 1e-10 * bound
        and abs(at_half - bound) <= 1e-10 * bound
    )
    return ok, f"max |B| at periods = {worst_zero:.2e}, bound slack = {max(offenders):.2e}"


def _check_transcendental_inversion() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(400):
        n = int(rng.integers(0, 3))
        y = float(rng.uniform(-30.0, 0.999 if n == 0 else 30.0))
        x = inverse_x_over_tan(y, n)
        worst = max(worst, abs(x / math.tan(x) - y))
    return worst <= 1e-10, f"max round-trip residual = {worst:.2e} over 400 samples"


def _check_splitting_continuity() -> tuple[bool, str]:
    # The symmetric difference across the branch point shrinks linearly with
    # the probe width (the splitting has finite slope there); the actual
    # discontinuity is its Richardson-extrapolated delta -> 0 limit.
    wire = WireParams(**_PAPER_WIRE)
    kappa = wire.lambda_scale
    scale = wire.level_spacing

    def jump(delta: float) -> float:
        eps_lo = 2.0 * math.asin((1.0 - delta) / kappa)
        eps_hi = 2.0 * math.asin((1.0 + delta) / kappa)
        return abs(wire_splitting(wire, eps_lo).E - wire_splitting(wire, eps_hi).E)

    j4, j6 = jump(1e-4), jump(1e-6)
    discontinuity = abs(100.0 * j6 - j4) / 99.0 / scale
    trend_ok = j6 <= 0.02 * j4
    e0 = wire_splitting(wire, 0.0).E
    exact0 = abs(e0 - 0.5 * math.pi * scale) <= 1e-12 * scale
    ok = discontinuity <= 1e-6 and trend_ok and exact0
    return ok, f"extrapolated branch-point jump = {discontinuity:.2e} x (v_F/L)"


def _check_circuit_series_vs_exact() -> tuple[bool, str]:
    circ = CircuitParams(**_PAPER_CIRCUIT)
    eta = circ.eta
    worst = 0.0
    for phi_e in np.linspace(0.0, 2 * math.pi, 12, endpoint=False):
        c = replace(circ, phi_e=float(phi_e))
        for phi in np.linspace(0.0, 2 * math.pi, 12, endpoint=False):
            for p in (-1.0, 0.0, 1.0):
                diff = abs(phi_J_series(c, float(phi), p) - phi_J_exact(c, float(phi), p))
                worst = max(worst, diff)
    return worst <= 5 * eta**3, f"max |series - exact| = {worst:.2e} (bound {5 * eta**3:.2e})"


def _check_switching_exactness() -> tuple[bool, str]:
    wire = WireParams(**_PAPER_WIRE)
    circ = CircuitParams(**_PAPER_CIRCUIT)
    lam1_off = couplings(wire, replace(circ, phi_e=0.0)).lambda1
    lam2_off = couplings(wire, replace(circ, phi_e=math.pi)).lambda2
    eff = effective_qubit(replace(circ, phi_e=math.pi))
    ok = lam1_off == 0.0 and lam2_off == 0.0 and eff.E_J_bar == 0.0
    return ok, f"lambda1(phi_e=0) = {lam1_off!r}, lambda2(phi_e=pi) = {lam2_off!r}"


def _check_hermitian_builders() -> tuple[bool, str]:
    model = HamiltonianModel(fock_cutoff=8, nu=1.0, omega_r=5.0)
    cs = CouplingSet.pinned(lambda2=0.3, lambda1=0.1, omega_t=1.0)
    h_ct = build_H_CT(cs, model)
    h_i = build_H_I(cs, model, 0.37)
    dev = max(
        float(np.max(np.abs(h_ct - h_ct.conj().T))),
        float(np.max(np.abs(h_i - h_i.conj().T))),
    )
    cs0 = CouplingSet.pinned(lambda2=1e-300, lambda1=0.1, omega_t=1.0)
    h0 = build_H_CT(replace(cs0, lambda2=0.0), model)
    n_op = model.n_photon
    comm = float(np.max(np.abs(h0 @ n_op - n_op @ h0)))
    scale = float(np.max(np.abs(h0)))
    ok = dev <= 1e-12 * max(1.0, scale) and comm <= 1e-12 * max(1.0, scale)
    return ok, f"hermiticity dev = {dev:.2e}, [H(lambda2=0), n] = {comm:.2e}"


def _numeric_columns(lam2: float, nu: float, t_final: float, model: HamiltonianModel) -> np.ndarray:
    """Fixed-step RK4 integration of the interaction-picture dynamics,
    applied to the four cavity-vacuum basis columns."""
    cs = CouplingSet.pinned(lambda2=lam2)
    dim = model.dim
    cols = np.zeros((dim, 4), dtype=complex)
    for j in range(4):
        cols[j * model.fock_cutoff, j] = 1.0
    norm_h = 4.0 * lam2 * math.sqrt(model.fock_cutoff)
    steps = max(64, int(math.ceil(t_final * norm_h / 0.02)))
    dt = t_final / steps
    y = cols
    t = 0.0
    for _ in range(steps):
        k1 = -1j * (build_H_I(cs, model, t) @ y)
        k2 = -1j * (build_H_I(cs, model, t + 0.5 * dt) @ (y + 0.5 * dt * k1))
        k3 = -1j * (build_H_I(cs, model, t + 0.5 * dt) @ (y + 0.5 * dt * k2))
        k4 = -1j * (build_H_I(cs, model, t + dt) @ (y + dt * k3))
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
    return y


def _check_propagator_oracle(mutations: frozenset) -> tuple[bool, str]:
    lam2 = 2 * math.pi * 32e6
    sch = GateSchedule(k=1, lambda2=lam2)
    model = HamiltonianModel(fock_cutoff=16, nu=sch.nu)
    original = _dyn.propagator_AB
    if "gate-phase-sign" in mutations:
        def mutated(lambda2, nu, t):
            a, b = original(lambda2, nu, t)
            return -a, b

        _dyn.propagator_AB = mutated
    try:
        worst = 0.0
        for frac in (0.31, 0.77):
            t = frac * sch.tau
            u = _dyn.analytic_U(lam2, sch.nu, t, model)
            cols = np.arange(4) * model.fock_cutoff
            diff = u[:, cols] - _numeric_columns(lam2, sch.nu, t, model)
            worst = max(worst, float(np.max(np.abs(diff))))
    finally:
        _dyn.propagator_AB = original
    return worst <= 1e-6, f"max |U_analytic - U_numeric| = {worst:.2e} on vacuum columns"


def _check_closed_gate() -> tuple[bool, str]:
    sch = GateSchedule(k=1, lambda2=2 * math.pi * 32e6)
    state = ideal_gate_state(sch, HamiltonianModel(fock_cutoff=12, nu=sch.nu))
    fid = state_fidelity(partial_trace(state, (0, 1)), _dyn.target_entangled_state())
    return fid >= 1.0 - 1e-6, f"closed-system gate fidelity = {fid:.10f}"


def _check_master_equation_limits() -> tuple[bool, str]:
    # Photon decay: <n>(t) = exp(-2*kappa*t) from a one-photon state.
    n = 6
    kappa = 0.7
    a = destroy(n)
    spec = LindbladSpec(hamiltonian=lambda t: np.zeros((n, n), complex), channels=((a, kappa),))
    rho0 = QuantumState.pure(basis_state(n, 1), (n,))
    t_grid = np.linspace(0.0, 1.5, 7)
    states = integrate_master_equation(spec, rho0, t_grid)
    worst = max(
        abs(float(np.real(np.trace(number_op(n) @ s.data))) - math.exp(-2 * kappa * t))
        for t, s in zip(t_grid, states)
    )
    # Zero-rate limit: unitary propagation of a random qubit pair.
    rng = np.random.default_rng(3)
    h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = 0.5 * (h + h.conj().T)
    vec = rng.normal(size=4) + 1j * rng.normal(size=4)
    vec /= np.linalg.norm(vec)
    spec_u = LindbladSpec(hamiltonian=lambda t: h, channels=())
    out = integrate_master_equation(spec_u, QuantumState.pure(vec, (2, 2)), [0.0, 0.9])[-1]
    u = expm_hermitian(h, 0.9)
    rho_ref = u @ np.outer(vec, vec.conj()) @ u.conj().T
    dev_u = float(np.max(np.abs(out.data - rho_ref)))
    ok = worst <= 1e-6 and dev_u <= 1e-8
    return ok, f"decay-law dev = {worst:.2e}, unitary-limit dev = {dev_u:.2e}"


_GROUPS = [
    ("schedule_algebra", lambda m: _check_schedule_algebra()),
    ("propagator_periodicity", lambda m: _check_propagator_periodicity()),
    ("transcendental_inversion", lambda m: _check_transcendental_inversion()),
    ("splitting_continuity", lambda m: _check_splitting_continuity()),
    ("circuit_series_vs_exact", lambda m: _check_circuit_series_vs_exact()),
    ("switching_exactness", lambda m: _check_switching_exactness()),
    ("hermitian_builders", lambda m: _check_hermitian_builders()),
    ("propagator_oracle", _check_propagator_oracle),
    ("closed_gate", lambda m: _check_closed_gate()),
    ("master_equation_limits", lambda m: _check_master_equation_limits()),
]


def run_validation(mutations: tuple[str, ...] = ()) -> dict:
    """Run all invariant groups; returns {group: {passed, detail, seconds}}."""
    bad = set(mutations) - set(MUTATIONS)
    if bad:
        raise ValueError(f"unknown mutations {sorted(bad)}")
    frozen = frozenset(mutations)
    report = {}
    for name, check in _GROUPS:
        start = time.perf_counter()
        try:
            passed, detail = check(frozen)
        except Exception as exc:  # a crashed group is a failed group
            passed, detail = False, f"exception: {exc!r}"
        report[name] = {
            "passed": bool(passed),
            "detail": detail,
            "seconds": round(time.perf_counter() - start, 4),
        }
    return report
