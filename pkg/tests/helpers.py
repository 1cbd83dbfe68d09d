"""Independent numerical oracles used by the test suite.

Everything here deliberately avoids the code paths it is used to check:
roots come from plain bisection, matrix exponentials from a scaling-and-
squaring Taylor series, propagators from fixed-step Runge-Kutta with step
doubling, and the splitting derivative from implicit differentiation of the
quantization condition.
"""

import math

import numpy as np


def bisect_root(f, lo: float, hi: float, iters: int = 200) -> float:
    """Plain bisection to double precision; requires f(lo)*f(hi) < 0."""
    f_lo = f(lo)
    assert f_lo * f(hi) < 0, "root not bracketed"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo = mid
            f_lo = f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def expm_taylor(m: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaled Taylor summation to machine precision."""
    m = np.asarray(m, dtype=complex)
    norm = float(np.max(np.abs(m))) * m.shape[0]
    squarings = max(0, int(math.ceil(math.log2(max(norm, 1e-300)))) + 1)
    a = m / (2.0**squarings)
    result = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, 60):
        term = term @ a / k
        result = result + term
        if np.max(np.abs(term)) < 1e-20:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def rk4_columns(h_of_t, y0: np.ndarray, t_final: float, steps: int) -> np.ndarray:
    """Fixed-step RK4 for i dY/dt = H(t) Y, integrating the columns of y0."""
    y = np.array(y0, dtype=complex)
    dt = t_final / steps
    t = 0.0
    for _ in range(steps):
        k1 = -1j * (h_of_t(t) @ y)
        k2 = -1j * (h_of_t(t + 0.5 * dt) @ (y + 0.5 * dt * k1))
        k3 = -1j * (h_of_t(t + 0.5 * dt) @ (y + 0.5 * dt * k2))
        k4 = -1j * (h_of_t(t + dt) @ (y + dt * k3))
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
    return y


def rk4_columns_step_doubled(
    h_of_t, y0: np.ndarray, t_final: float, steps: int, tol: float = 1e-8
) -> np.ndarray:
    """RK4 with step-doubling validation: halves the step until stable."""
    coarse = rk4_columns(h_of_t, y0, t_final, steps)
    for _ in range(6):
        steps *= 2
        fine = rk4_columns(h_of_t, y0, t_final, steps)
        if float(np.max(np.abs(fine - coarse))) < tol:
            return fine
        coarse = fine
    raise AssertionError("step-doubled RK4 did not stabilize")


def x_over_tan(x: float) -> float:
    return x / math.tan(x)


def u_over_tanh(u: float) -> float:
    return u / math.tanh(u)


def implicit_splitting_derivative(params, phi: float) -> float:
    """dE/dphi from implicit differentiation of the quantization condition.

    Oscillatory branch (Lambda <= 1, x/tan x = Lambda):
        dG/dLambda = x (sin x - x cos x) / (sin^3 x * Lambda'(x) * G)
    Evanescent branch (u/tanh u = Lambda): same with hyperbolic functions and
    G = sqrt(Lambda^2 - u^2).
    """
    kappa = params.lambda_scale
    lam = kappa * abs(math.sin(0.5 * phi))
    if lam == 0.0:
        return 0.0
    sign = 1.0 if math.sin(0.5 * phi) >= 0 else -1.0
    dlam_dphi = 0.5 * kappa * math.cos(0.5 * phi) * sign
    if abs(lam - 1.0) < 1e-12:
        # At the branch point itself: x -> 0 with x^2 ~ 3(1 - Lambda), so
        # G = sqrt(Lambda^2 + x^2) has slope exactly -1/2 there.
        return params.level_spacing * (-0.5) * dlam_dphi
    if lam <= 1.0:
        x = bisect_root(lambda t: x_over_tan(t) - lam, 1e-12, math.pi - 1e-9)
        g = math.hypot(lam, x)
        dlam_dx = (math.sin(x) * math.cos(x) - x) / math.sin(x) ** 2
        dg_dlam = (
            x
            * (math.sin(x) - x * math.cos(x))
            / (math.sin(x) ** 3 * dlam_dx * g)
        )
    else:
        u = bisect_root(lambda t: u_over_tanh(t) - lam, 1e-12, lam)
        g = math.sqrt((lam - u) * (lam + u))
        dlam_du = (math.sinh(u) * math.cosh(u) - u) / math.sinh(u) ** 2
        dg_dlam = (
            u
            * (math.sinh(u) - u * math.cosh(u))
            / (math.sinh(u) ** 3 * dlam_du * g)
        )
    return params.level_spacing * dg_dlam * dlam_dphi


def random_pure_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (m + m.conj().T)
