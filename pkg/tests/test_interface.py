import dataclasses
import math

import numpy as np
import pytest

from topoqed.interface import (
    PHI_C_MIN,
    CouplingSet,
    HamiltonianModel,
    build_H_CT,
    build_H_I,
    build_H_single_interface,
    couplings,
    optimal_working_point,
)
from topoqed.qcore import basis_state, entanglement_entropy, QuantumState, tensor, eye

from helpers import expm_taylor, random_pure_state


class TestCouplings:
    def test_qubit_coupling_switched_off_at_zero_flux(self, paper_wire, paper_circuit):
        cs = couplings(paper_wire, dataclasses.replace(paper_circuit, phi_e=0.0))
        assert cs.lambda1 == 0.0
        assert cs.lambda2 != 0.0

    def test_cavity_coupling_switched_off_at_half_flux(self, paper_wire, paper_circuit):
        cs = couplings(paper_wire, dataclasses.replace(paper_circuit, phi_e=math.pi))
        assert cs.lambda2 == 0.0
        assert cs.lambda1 != 0.0

    def test_coupling_ratio_follows_flux_angle(self, paper_wire, paper_circuit):
        rng = np.random.default_rng(23)
        for _ in range(6):
            phi_e = float(rng.uniform(0.2, math.pi - 0.2))
            circ = dataclasses.replace(paper_circuit, phi_e=phi_e)
            cs = couplings(paper_wire, circ)
            expected = math.sin(phi_e / 2) / (circ.g * math.cos(phi_e / 2))
            assert abs(cs.lambda1 / cs.lambda2 - expected) < 1e-9 * abs(expected)

    def test_working_phase_includes_flux_shift(self, paper_wire, paper_circuit):
        circ = dataclasses.replace(paper_circuit, phi_e=1.0)
        cs = couplings(paper_wire, circ)
        assert cs.effective is not None
        assert cs.working_phi == circ.phi_c + cs.effective.f1
        assert cs.working_phi != circ.phi_c

    def test_omega_t_is_splitting_at_working_phase(self, paper_wire, paper_circuit):
        from topoqed.wire import wire_splitting

        cs = couplings(paper_wire, paper_circuit)
        assert cs.omega_t == wire_splitting(paper_wire, cs.working_phi).E


class TestOptimalWorkingPoint:
    def test_matches_finer_brute_force_grid(self, paper_wire, paper_circuit):
        circ = dataclasses.replace(paper_circuit, phi_e=0.0)
        phi_c, value = optimal_working_point(paper_wire, circ, "lambda2", grid_step=1e-2)
        fine = np.arange(PHI_C_MIN, math.pi - PHI_C_MIN + 5e-4, 1e-3)
        fine_best = max(
            abs(couplings(paper_wire, dataclasses.replace(circ, phi_c=float(p))).lambda2)
            for p in fine
        )
        assert abs(abs(value) - fine_best) <= 1e-6 * fine_best

    def test_switched_off_coupling_is_zero_everywhere(self, paper_wire, paper_circuit):
        circ = dataclasses.replace(paper_circuit, phi_e=0.0)
        for phi_c in (0.1, 0.9, 2.2):
            cs = couplings(paper_wire, dataclasses.replace(circ, phi_c=phi_c))
            assert cs.lambda1 == 0.0
        _, best = optimal_working_point(paper_wire, circ, "lambda1", grid_step=5e-2)
        assert best == 0.0

    def test_beats_random_samples(self, paper_wire, paper_circuit):
        circ = dataclasses.replace(paper_circuit, phi_e=0.0)
        _, best = optimal_working_point(paper_wire, circ, "lambda2", grid_step=1e-2)
        rng = np.random.default_rng(31)
        for _ in range(100):
            phi_c = float(rng.uniform(PHI_C_MIN, math.pi - PHI_C_MIN))
            sample = couplings(paper_wire, dataclasses.replace(circ, phi_c=phi_c)).lambda2
            assert abs(best) >= abs(sample) - 1e-12 * abs(best)

    def test_unknown_target_rejected(self, paper_wire, paper_circuit):
        with pytest.raises(ValueError):
            optimal_working_point(paper_wire, paper_circuit, "lambda3")


class TestHamiltonianModel:
    def test_minimum_cutoff_enforced(self):
        with pytest.raises(ValueError):
            HamiltonianModel(fock_cutoff=4, nu=1.0)

    def test_dims(self):
        model = HamiltonianModel(fock_cutoff=10, nu=1.0)
        assert model.dims == (2, 2, 10)
        assert model.dim == 40


class TestBuildHCT:
    def test_hermitian(self):
        model = HamiltonianModel(fock_cutoff=8, nu=1.0, omega_r=5.0)
        cs = CouplingSet.pinned(lambda2=0.4, lambda1=0.2, omega_t=1.3)
        h = build_H_CT(cs, model)
        assert np.max(np.abs(h - h.conj().T)) <= 1e-12 * np.max(np.abs(h))

    def test_photon_creation_matrix_element(self):
        model = HamiltonianModel(fock_cutoff=8, nu=1.0, omega_r=5.0)
        cs = CouplingSet.pinned(lambda2=0.4, lambda1=0.2, omega_t=1.3)
        h = build_H_CT(cs, model)
        n = model.fock_cutoff
        ket_000 = np.kron(np.kron(basis_state(2, 0), basis_state(2, 0)), basis_state(n, 0))
        ket_001 = np.kron(np.kron(basis_state(2, 0), basis_state(2, 0)), basis_state(n, 1))
        element = complex(ket_001.conj() @ h @ ket_000)
        assert abs(element - (-2.0 * cs.lambda2)) < 1e-14

    def test_commutes_with_photon_number_when_cavity_decoupled(self):
        model = HamiltonianModel(fock_cutoff=8, nu=1.0, omega_r=5.0)
        cs = CouplingSet.pinned(lambda2=1.0, lambda1=0.2, omega_t=1.3)
        h = build_H_CT(dataclasses.replace(cs, lambda2=0.0), model)
        comm = h @ model.n_photon - model.n_photon @ h
        assert np.max(np.abs(comm)) <= 1e-12 * np.max(np.abs(h))


class TestBuildHI:
    def test_initial_time_form(self):
        model = HamiltonianModel(fock_cutoff=8, nu=2.0)
        cs = CouplingSet.pinned(lambda2=0.7)
        h0 = build_H_I(cs, model, 0.0)
        quad = model.a_op + model.a_op.conj().T
        expected = -cs.lambda2 * quad @ model.j_z
        assert np.max(np.abs(h0 - expected)) < 1e-14

    def test_neutral_subspace_decoupled(self):
        # J_z eigenvalues on the two qubits are {+1, 0, 0, -1}; the 0 sector
        # gives vanishing rows and columns at any time.
        model = HamiltonianModel(fock_cutoff=8, nu=2.0)
        cs = CouplingSet.pinned(lambda2=0.7)
        n = model.fock_cutoff
        h = build_H_I(cs, model, 0.93)
        neutral = list(range(n, 3 * n))  # |01> and |10> blocks
        assert np.max(np.abs(h[neutral, :])) == 0.0
        assert np.max(np.abs(h[:, neutral])) == 0.0

    def test_expectation_values_real(self):
        model = HamiltonianModel(fock_cutoff=8, nu=2.0)
        cs = CouplingSet.pinned(lambda2=0.7)
        rng = np.random.default_rng(12)
        for t in rng.uniform(0.0, 10.0, 5):
            h = build_H_I(cs, model, float(t))
            psi = random_pure_state(rng, model.dim)
            assert abs(np.imag(psi.conj() @ h @ psi)) < 1e-12

    def test_requires_positive_detuning(self):
        model = HamiltonianModel(fock_cutoff=8, nu=0.0)
        with pytest.raises(ValueError):
            build_H_I(CouplingSet.pinned(lambda2=1.0), model, 0.0)


class TestBuildHSingleInterface:
    def test_spectrum_two_doublets(self):
        cs = CouplingSet.pinned(lambda2=0.0, lambda1=0.8)
        h = build_H_single_interface(cs)
        eigs = np.sort(np.linalg.eigvalsh(h))
        assert np.allclose(eigs, [-0.4, -0.4, 0.4, 0.4], atol=1e-14)

    def test_commutes_with_both_qubit_axes(self):
        from topoqed.qcore import SIGMA_X, SIGMA_Z

        cs = CouplingSet.pinned(lambda2=0.0, lambda1=0.8)
        h = build_H_single_interface(cs)
        sx = tensor([SIGMA_X, eye(2)])
        tz = tensor([eye(2), SIGMA_Z])
        assert np.max(np.abs(h @ sx - sx @ h)) <= 1e-14
        assert np.max(np.abs(h @ tz - tz @ h)) <= 1e-14

    def test_quarter_turn_is_entangling(self):
        # exp(-i H t1) with lambda1*t1 = -pi/2 on |0>_s |+>_t creates a
        # maximally entangled state (1 bit across the cut); direct 4x4
        # computation through the series oracle.
        lam1 = 0.8
        t1 = -0.5 * math.pi / lam1
        cs = CouplingSet.pinned(lambda2=0.0, lambda1=lam1)
        u = expm_taylor(-1j * build_H_single_interface(cs) * t1)
        plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
        psi0 = np.kron(basis_state(2, 0), plus)
        psi1 = u @ psi0
        state = QuantumState.pure(psi1 / np.linalg.norm(psi1), (2, 2))
        assert abs(entanglement_entropy(state, (0,)) - 1.0) < 1e-10
