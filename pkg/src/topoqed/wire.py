"""Bound-state splitting of the Majorana pair versus superconducting phase.

The hybridization energy of the Majorana end modes of a narrow
superconductor/topological-insulator/superconductor wire segment is

    E(eps) = (v_F / L) * sqrt(Lambda**2 + x**2),   Lambda = (Delta0*L/v_F) * |sin(eps/2)|,

where ``x`` solves the quantization condition x/tan(x) = Lambda on its lowest
branch.  For Lambda <= 1 the solution is real (oscillatory bound state).  For
Lambda > 1 the lowest solution moves onto the imaginary axis, x -> i*u with
u/tanh(u) = Lambda, and the splitting continues as

    E = (v_F / L) * sqrt(Lambda**2 - u**2),

which decays like 2*Lambda*exp(-Lambda) for large Lambda.  The two branches
join continuously (with continuous slope) at Lambda = 1.

All energies are angular frequencies (rad/s).  The splitting is an even,
2*pi-periodic function of the phase, so its derivative vanishes by symmetry
at eps = 0 while the one-sided slope there is -Delta0/pi.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .qcore import ConvergenceError

__all__ = [
    "HBAR",
    "K_B",
    "SplittingResult",
    "WireParams",
    "inverse_x_over_tan",
    "splitting_derivative",
    "thermal_leakage",
    "wire_splitting",
]

# CODATA 2018 exact values.
HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K

_ROOT_TOL = 1e-12
_MAX_ITER = 200


@dataclass(frozen=True)
class WireParams:
    """Physical parameters of the wire hosting the Majorana pair.

    v_F : effective Fermi velocity (m/s)
    L : separation of the bound states (m)
    Delta0 : induced s-wave gap as an angular frequency (rad/s)
    W : wire width (m); validity metadata only
    T : temperature (K)
    """

    v_F: float
    L: float
    Delta0: float
    W: float = 0.0
    T: float = 0.02

    def __post_init__(self):
        if self.v_F <= 0 or self.L <= 0 or self.Delta0 <= 0:
            raise ValueError("v_F, L and Delta0 must be positive")
        if not self.narrow_wire_ok:
            warnings.warn(
                f"wire width W={self.W} violates W*Delta0/v_F < 1; "
                "the single-channel description is unreliable",
                stacklevel=2,
            )

    @property
    def narrow_wire_ok(self) -> bool:
        return self.W * self.Delta0 / self.v_F < 1.0

    @property
    def lambda_scale(self) -> float:
        """Dimensionless prefactor Delta0 * L / v_F."""
        return self.Delta0 * self.L / self.v_F

    @property
    def level_spacing(self) -> float:
        """Confinement frequency scale v_F / L (rad/s)."""
        return self.v_F / self.L


@dataclass(frozen=True)
class SplittingResult:
    """Energy splitting together with the dimensionless phase parameter."""

    E: float
    Lambda: float
    branch: str  # "oscillatory" (Lambda <= 1) or "evanescent" (Lambda > 1)

    def __post_init__(self):
        if self.E < 0 or self.Lambda < 0:
            raise ValueError("E and Lambda must be non-negative")


def _newton_bisect(f, df, lo, hi, f_lo, f_tol, max_iter=_MAX_ITER):
    """Safeguarded root finder: bisection with Newton acceleration.

    Requires a sign change between ``lo`` and ``hi``; ``f_lo`` is the sign of
    f at the low end.  Terminates when |f| <= f_tol, raises ConvergenceError
    after ``max_iter`` iterations.
    """
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = f(x)
        if abs(fx) <= f_tol:
            return x
        if (fx > 0) == (f_lo > 0):
            lo = x
        else:
            hi = x
        dfx = df(x)
        newton_ok = False
        if dfx != 0.0:
            step = fx / dfx
            cand = x - step
            if lo < cand < hi:
                x = cand
                newton_ok = True
        if not newton_ok:
            x = 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * max(1.0, abs(x)):
            # Bracket exhausted at double precision; accept if residual sane.
            if abs(f(x)) <= max(f_tol, 1e-9):
                return x
            break
    raise ConvergenceError(
        f"root finder did not reach |f| <= {f_tol:g} within {max_iter} iterations"
    )


def _x_over_tan(x: float) -> float:
    return x / math.tan(x)


def _d_x_over_tan(x: float) -> float:
    s = math.sin(x)
    return (0.5 * math.sin(2.0 * x) - x) / (s * s)


def inverse_x_over_tan(y: float, n: int = 0) -> float:
    """Inverse of y = x/tan(x) on its n-th monotone branch.

    Branch 0 maps (-inf, 1) onto (0, pi) with the y -> 1 limit returning 0;
    branch n >= 1 maps the whole real line onto (n*pi, (n+1)*pi).  The
    residual |x/tan(x) - y| is driven below 1e-12 (scaled by max(1, |y|)).
    """
    if n < 0:
        raise ValueError("branch index must be non-negative")
    y = float(y)
    if n == 0:
        if y > 1.0:
            raise ValueError(f"branch 0 requires y <= 1, got {y}")
        if y == 1.0:
            return 0.0
        lo, hi = 1e-12, math.pi - 1e-12
        # Near y -> 1 the root sits at x ~ sqrt(3*(1-y)); shrink the bracket
        # so bisection starts in a region where f is well resolved.
        if y > 0.9:
            hi = min(hi, 4.0 * math.sqrt(3.0 * (1.0 - y)) + 1e-6)
        f_lo = 1.0 - y if y < 0.999 else _x_over_tan(lo) - y
    else:
        lo = n * math.pi + 1e-9
        hi = (n + 1) * math.pi - 1e-9
        f_lo = _x_over_tan(lo) - y
    f_tol = _ROOT_TOL * max(1.0, abs(y))
    return _newton_bisect(
        lambda x: _x_over_tan(x) - y, _d_x_over_tan, lo, hi, f_lo, f_tol
    )


def _u_over_tanh(u: float) -> float:
    return u / math.tanh(u)


def _d_u_over_tanh(u: float) -> float:
    s = math.sinh(u)
    return (0.5 * math.sinh(2.0 * u) - u) / (s * s)


def inverse_x_over_tanh(y: float) -> float:
    """Inverse of y = u/tanh(u) for y >= 1 (evanescent continuation)."""
    y = float(y)
    if y < 1.0:
        raise ValueError(f"u/tanh(u) >= 1 for all u; got y={y}")
    if y <= 1.0 + 1e-15:
        return 0.0
    lo = 1e-8
    hi = y  # u/tanh(u) = y implies u = y*tanh(u) < y
    f_lo = _u_over_tanh(lo) - y
    f_tol = _ROOT_TOL * max(1.0, abs(y))
    return _newton_bisect(
        lambda u: _u_over_tanh(u) - y, _d_u_over_tanh, lo, hi, f_lo, f_tol
    )


def wire_splitting(params: WireParams, eps: float) -> SplittingResult:
    """Bound-state energy splitting E(eps) at superconducting phase ``eps``."""
    lam = params.lambda_scale * abs(math.sin(0.5 * eps))
    v_over_l = params.level_spacing
    if lam <= 1.0:
        x = inverse_x_over_tan(lam, 0)
        energy = v_over_l * math.hypot(lam, x)
        branch = "oscillatory"
    else:
        u = inverse_x_over_tanh(lam)
        # Lambda - u suffers cancellation for large Lambda; evaluate it from
        # the defining relation instead: Lambda - u = Lambda * (1 - tanh u).
        eu = math.exp(-2.0 * u)
        delta = 2.0 * lam * eu / (1.0 + eu)
        energy = v_over_l * math.sqrt(delta * (lam + u))
        branch = "evanescent"
    return SplittingResult(E=energy, Lambda=lam, branch=branch)


def _nearest_kink_distance(phi: float) -> float:
    """Distance from phi to the nearest zero of sin(phi/2) (a cusp of E)."""
    two_pi = 2.0 * math.pi
    r = math.fmod(phi, two_pi)
    return min(abs(r), two_pi - abs(r))


def _nearest_branch_distance(params: WireParams, phi: float) -> float:
    """Distance from phi to the nearest branch point Lambda(phi) = 1.

    The splitting has a jump in curvature (not in value or slope) there, so
    finite-difference stencils should avoid straddling it.
    """
    kappa = params.lambda_scale
    if kappa <= 1.0:
        return math.inf
    two_pi = 2.0 * math.pi
    phi_star = 2.0 * math.asin(1.0 / kappa)
    r = math.fmod(abs(phi), two_pi)
    return min(abs(r - phi_star), abs(r - (two_pi - phi_star)))


def splitting_derivative(
    params: WireParams, phi: float, rtol: float = 1e-6, max_levels: int = 10
) -> float:
    """dE/dphi by Richardson-extrapolated central differences.

    The splitting is even in phi with a cusp at phi = 0 (mod 2*pi); exactly
    at a cusp the symmetric derivative is 0 and that value is returned.  Away
    from it the finite-difference step is capped at half the distance to the
    nearest cusp and to the nearest branch point, so the stencil stays on a
    smooth piece of the curve.  The extrapolation's self-reported relative
    error must fall below ``rtol`` or a ConvergenceError is raised.
    """
    dist = _nearest_kink_distance(phi)
    if dist == 0.0:
        return 0.0
    branch_dist = _nearest_branch_distance(params, phi)
    if branch_dist < 1e-6:
        # Within float noise of the branch point the slope is still defined
        # (it is continuous): average two clean one-sided neighbours, offset
        # far enough that they do not recurse into this case themselves.
        left = splitting_derivative(params, phi - 2e-6, rtol, max_levels)
        right = splitting_derivative(params, phi + 2e-6, rtol, max_levels)
        return 0.5 * (left + right)
    h0 = min(0.05, 0.5 * dist, 0.5 * branch_dist)

    def energy(p: float) -> float:
        return wire_splitting(params, p).E

    table: list[list[float]] = []
    best = 0.0
    best_err = math.inf
    h = h0
    for i in range(max_levels):
        d0 = (energy(phi + h) - energy(phi - h)) / (2.0 * h)
        row = [d0]
        for j in range(1, i + 1):
            factor = 4.0**j
            row.append((factor * row[j - 1] - table[i - 1][j - 1]) / (factor - 1.0))
        table.append(row)
        if i > 0:
            err = abs(row[-1] - table[i - 1][-1])
            if err < best_err:
                best, best_err = row[-1], err
            scale = max(abs(best), 1e-300)
            if best_err <= rtol * scale:
                return best
        h *= 0.5
    raise ConvergenceError(
        f"derivative extrapolation stalled at relative error "
        f"{best_err / max(abs(best), 1e-300):.3e} (phi={phi!r})"
    )


def thermal_leakage(params: WireParams) -> float:
    """Probability of thermally exciting the wire modes at E ~ v_F/L.

    Returns exp(-hbar*(v_F/L) / (k_B*T)) with CODATA constants.
    """
    if params.T <= 0:
        raise ValueError("temperature must be positive")
    return math.exp(-HBAR * params.level_spacing / (K_B * params.T))
