"""Dense complex linear algebra and open-system primitives.

Operators are plain ``numpy`` arrays of complex doubles; helpers below build
Pauli and truncated-oscillator matrices and combine them with Kronecker
products.  States are wrapped in :class:`QuantumState`, which validates the
usual physicality bounds (norm, trace, Hermiticity, positivity) on
construction.

Decay-rate convention
---------------------
``integrate_master_equation`` implements the master equation in the form

    drho/dt = -i [H, rho] + sum_c  r_c (2 L rho L+ - L+ L rho - rho L+ L)

i.e. each channel ``(L, r)`` enters with the prefactor written out above.
A cavity channel ``(a, kappa)`` therefore decays photon number as
``exp(-2*kappa*t)`` and a qubit channel ``(tau_minus, gamma)`` decays the
excited population as ``exp(-2*gamma*t)``: the *energy* decay rates are twice
the quoted channel rates.  This matters when comparing fidelity curves
against rates quoted in MHz.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "ConvergenceError",
    "IntegrationError",
    "LindbladSpec",
    "QuantumState",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "TAU_MINUS",
    "basis_state",
    "destroy",
    "entanglement_entropy",
    "expm_hermitian",
    "eye",
    "integrate_master_equation",
    "is_hermitian",
    "is_unitary",
    "number_op",
    "partial_trace",
    "state_fidelity",
    "tensor",
]

# Tolerances for state validation (see QuantumState).
PURE_NORM_TOL = 1e-10
TRACE_TOL = 1e-8
HERMITICITY_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-8

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
# Lowering operator toward the tau_z = +1 ground state: |0><1|.
TAU_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to reach its tolerance."""


class IntegrationError(RuntimeError):
    """An ODE integration failed or produced an unphysical state."""


def eye(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def destroy(n: int) -> np.ndarray:
    """Truncated oscillator lowering operator, a|k> = sqrt(k)|k-1>."""
    if n < 1:
        raise ValueError("Fock dimension must be at least 1")
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(complex)


def number_op(n: int) -> np.ndarray:
    return np.diag(np.arange(n, dtype=float)).astype(complex)


def basis_state(dim: int, k: int) -> np.ndarray:
    vec = np.zeros(dim, dtype=complex)
    vec[k] = 1.0
    return vec


def tensor(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of the given operators, in order."""
    if len(ops) == 0:
        raise ValueError("tensor() requires at least one operator")
    return reduce(np.kron, [np.asarray(op, dtype=complex) for op in ops])


def is_hermitian(op: np.ndarray, tol: float = 1e-10) -> bool:
    scale = max(1.0, float(np.max(np.abs(op))) if op.size else 1.0)
    return bool(np.max(np.abs(op - op.conj().T)) <= tol * scale)


def is_unitary(op: np.ndarray, tol: float = 1e-10) -> bool:
    dev = np.max(np.abs(op @ op.conj().T - np.eye(op.shape[0])))
    return bool(dev <= tol)


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i*h*t) for Hermitian ``h``, via eigendecomposition.

    Hermiticity is checked against a tolerance of 1e-10 relative to the
    largest matrix entry; the result is verified unitary to 1e-10.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expm_hermitian expects a square matrix")
    if not is_hermitian(h):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    if not is_unitary(u, 1e-10):
        raise IntegrationError("eigendecomposition produced a non-unitary result")
    return u


@dataclass(frozen=True)
class QuantumState:
    """Pure state vector or density matrix over a list of subsystems.

    ``dims`` gives the subsystem dimensions in tensor order; ``data`` is the
    amplitude vector (pure) or density matrix (mixed).  Validation enforces
    unit norm for pure states, and unit trace / Hermiticity / positivity
    within the module tolerances for mixed ones.
    """

    kind: str
    dims: tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if any(d < 1 for d in dims):
            raise ValueError("subsystem dimensions must be positive")
        total = int(np.prod(dims))
        data = np.asarray(self.data, dtype=complex)
        if self.kind == "pure":
            if data.shape != (total,):
                raise ValueError(f"pure state needs shape ({total},), got {data.shape}")
            norm = float(np.linalg.norm(data))
            if abs(norm - 1.0) > PURE_NORM_TOL:
                raise ValueError(f"pure state norm {norm!r} deviates from 1")
        elif self.kind == "mixed":
            if data.shape != (total, total):
                raise ValueError(
                    f"density matrix needs shape ({total},{total}), got {data.shape}"
                )
            tr = complex(np.trace(data))
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"density matrix trace {tr!r} deviates from 1")
            if np.max(np.abs(data - data.conj().T)) > HERMITICITY_TOL:
                raise ValueError("density matrix is not Hermitian within tolerance")
            min_eig = float(np.linalg.eigvalsh(data)[0])
            if min_eig < EIGENVALUE_FLOOR:
                raise ValueError(f"density matrix has eigenvalue {min_eig} < {EIGENVALUE_FLOOR}")
        else:
            raise ValueError(f"kind must be 'pure' or 'mixed', got {self.kind!r}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def pure(cls, vec: np.ndarray, dims: Sequence[int]) -> "QuantumState":
        return cls("pure", tuple(dims), np.asarray(vec, dtype=complex))

    @classmethod
    def mixed(cls, rho: np.ndarray, dims: Sequence[int]) -> "QuantumState":
        return cls("mixed", tuple(dims), np.asarray(rho, dtype=complex))

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def density_matrix(self) -> np.ndarray:
        """The state as a density matrix (outer product for pure states)."""
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return np.array(self.data)


@dataclass(frozen=True)
class LindbladSpec:
    """Time-dependent Hamiltonian plus collapse channels with rates.

    ``hamiltonian`` maps a time (seconds) to a Hermitian matrix; ``channels``
    is a sequence of ``(collapse_operator, rate)`` pairs with rate >= 0.  See
    the module docstring for the prefactor convention.
    """

    hamiltonian: Callable[[float], np.ndarray]
    channels: tuple = field(default_factory=tuple)

    def __post_init__(self):
        dim = np.asarray(self.hamiltonian(0.0)).shape[0]
        checked = []
        for op, rate in self.channels:
            op = np.asarray(op, dtype=complex)
            if op.shape != (dim, dim):
                raise ValueError(
                    f"collapse operator shape {op.shape} does not match H dim {dim}"
                )
            if rate < 0:
                raise ValueError("channel rates must be non-negative")
            checked.append((op, float(rate)))
        object.__setattr__(self, "channels", tuple(checked))

    @property
    def dim(self) -> int:
        return np.asarray(self.hamiltonian(0.0)).shape[0]


def partial_trace(state: QuantumState, keep: Sequence[int]) -> QuantumState:
    """Reduced density matrix over the subsystems listed in ``keep``.

    Pure inputs are promoted to density matrices.  Kept subsystems retain
    their original relative order.
    """
    keep = sorted(set(int(k) for k in keep))
    n = len(state.dims)
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    rho = state.density_matrix()
    dims = state.dims
    rho = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # Repeatedly trace out the highest-index discarded subsystem so that the
    # remaining axis numbering stays valid.
    for i in sorted(traced, reverse=True):
        m = rho.ndim // 2
        rho = np.trace(rho, axis1=i, axis2=m + i)
    kept_dim = int(np.prod([dims[k] for k in keep]))
    rho = rho.reshape(kept_dim, kept_dim)
    return QuantumState.mixed(rho, tuple(dims[k] for k in keep))


def state_fidelity(rho: QuantumState, psi: QuantumState) -> float:
    """Overlap <psi| rho |psi> of a state with a pure reference."""
    if psi.kind != "pure":
        raise ValueError("reference state must be pure")
    if rho.dim != psi.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {psi.dim}")
    if rho.kind == "pure":
        return float(abs(np.vdot(psi.data, rho.data)) ** 2)
    return float(np.real(np.vdot(psi.data, rho.data @ psi.data)))


def entanglement_entropy(psi: QuantumState, cut: Sequence[int]) -> float:
    """Von Neumann entropy (bits) of the reduced state over ``cut``."""
    if psi.kind != "pure":
        raise ValueError("entanglement entropy requires a pure state")
    reduced = partial_trace(psi, cut).data
    eigs = np.linalg.eigvalsh(reduced)
    eigs = eigs[eigs > 1e-15]
    return float(-np.sum(eigs * np.log2(eigs)))


def _lindblad_rhs_factory(spec: LindbladSpec):
    dim = spec.dim
    ops = [(op, op.conj().T, op.conj().T @ op, rate) for op, rate in spec.channels]

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        rho = y.reshape(dim, dim)
        h = spec.hamiltonian(t)
        drho = -1j * (h @ rho - rho @ h)
        for op, op_dag, op_dag_op, rate in ops:
            drho += rate * (
                2.0 * (op @ rho @ op_dag) - op_dag_op @ rho - rho @ op_dag_op
            )
        return drho.ravel()

    return rhs


def integrate_master_equation(
    spec: LindbladSpec,
    rho0: QuantumState,
    t_grid: Sequence[float],
    rtol: float = 1e-9,
    atol: float = 1e-12,
) -> list[QuantumState]:
    """Propagate a density matrix through the master equation on ``t_grid``.

    Uses an adaptive embedded Runge-Kutta 4(5) pair on the vectorized density
    matrix.  Every output state is checked for trace preservation (1e-8),
    Hermiticity (1e-9) and positivity (eigenvalues >= -1e-8); the small
    anti-Hermitian integration residue is removed after the check.  Positivity
    is monitored, never enforced: a violation raises :class:`IntegrationError`
    rather than being silently projected away.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 1:
        raise ValueError("t_grid must be a non-empty 1-D sequence")
    if t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must increase strictly from 0")
    rho_init = rho0.density_matrix()
    dim = spec.dim
    if rho_init.shape != (dim, dim):
        raise ValueError("initial state dimension does not match the Hamiltonian")

    if len(t_grid) == 1:
        return [QuantumState.mixed(rho_init, rho0.dims)]

    sol = solve_ivp(
        _lindblad_rhs_factory(spec),
        (float(t_grid[0]), float(t_grid[-1])),
        rho_init.ravel(),
        method="RK45",
        t_eval=t_grid,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise IntegrationError(f"master-equation integration failed: {sol.message}")

    states = []
    for i, t in enumerate(t_grid):
        rho = sol.y[:, i].reshape(dim, dim)
        trace_dev = abs(complex(np.trace(rho)) - 1.0)
        if trace_dev > 1e-8:
            raise IntegrationError(f"trace deviation {trace_dev:.3e} at t={t:.3e}")
        herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
        if herm_dev > 1e-9:
            raise IntegrationError(f"Hermiticity deviation {herm_dev:.3e} at t={t:.3e}")
        rho = 0.5 * (rho + rho.conj().T)
        min_eig = float(np.linalg.eigvalsh(rho)[0])
        if min_eig < EIGENVALUE_FLOOR:
            raise IntegrationError(
                f"positivity violation: min eigenvalue {min_eig:.3e} at t={t:.3e}"
            )
        states.append(QuantumState.mixed(rho, rho0.dims))
    return states
