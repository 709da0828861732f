"""Independent dense master-equation integrator.

Evolves the full 4x4 density matrix of the coupled-spin pair with a
fixed-step RK4 scheme, doubling the step count until the endpoint
observables are converged.  Serves as the oracle against which the
closed-form 5x5 propagators are validated; it shares no code with them.

Convention: frequencies are quoted in angular units such that the coherent
generator entering the master equation is H/2; observable phases then evolve
at the gap frequency Omega, matching the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StepTooLarge
from .model import BathSegmentParams, ObservableVector, big_omega
from .propagators import ramp_field

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)

# collective spin-pair operators in the product basis {uu, ud, du, dd}
B1 = 0.5 * (np.kron(_SZ, _I2) + np.kron(_I2, _SZ))
B2 = 0.5 * (np.kron(_SX, _SX) - np.kron(_SY, _SY))
B3 = 0.5 * (np.kron(_SY, _SX) + np.kron(_SX, _SY))
B5 = np.kron(_SZ, _SZ)


def hamiltonian(omega: float, J: float) -> np.ndarray:
    return omega * B1 + J * B2


def energy_eigenbasis(omega: float, J: float) -> np.ndarray:
    """Columns are eigenvectors ordered (-Omega, 0, 0, +Omega).

    The Hamiltonian acts only on the {uu, dd} block; the zero subspace is
    spanned by the symmetric and antisymmetric single-flip states, taken in
    that fixed order.
    """
    th = 0.5 * math.atan2(J, omega)
    V = np.zeros((4, 4), dtype=complex)
    V[0, 0], V[3, 0] = -math.sin(th), math.cos(th)   # -Omega
    V[1, 1] = V[2, 1] = 1.0 / math.sqrt(2.0)         # symmetric zero
    V[1, 2], V[2, 2] = 1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)
    V[0, 3], V[3, 3] = math.cos(th), math.sin(th)    # +Omega
    return V


def jump_operators(
    omega: float, J: float, kappa_down: float, kappa_up: float
) -> list[np.ndarray]:
    """Ladder jumps between adjacent energy levels: four lowering channels
    (one per level pair) and their detailed-balance raising partners."""
    V = energy_eigenbasis(omega, J)
    g, s, a, e = V.T
    ops = []
    for lo, hi in ((g, s), (g, a), (s, e), (a, e)):
        lower = np.outer(lo, hi.conj())
        ops.append(math.sqrt(kappa_down) * lower)
        ops.append(math.sqrt(kappa_up) * lower.conj().T)
    return ops


def gibbs_state(omega: float, J: float, T: float) -> np.ndarray:
    H = hamiltonian(omega, J)
    w, V = np.linalg.eigh(H)
    p = np.exp(-w / T)
    p /= p.sum()
    return (V * p) @ V.conj().T


def observables_from_rho(rho: np.ndarray, omega: float, J: float) -> ObservableVector:
    Om = big_omega(omega, J)
    ops = (hamiltonian(omega, J), -J * B1 + omega * B2, Om * B3, Om * B5)
    vals = [float(np.trace(rho @ O).real) for O in ops]
    return ObservableVector(*vals)


def _lindblad_rhs(rho, H_gen, jumps, gamma):
    out = -1j * (H_gen @ rho - rho @ H_gen)
    for F in jumps:
        Fd = F.conj().T
        out = out + F @ rho @ Fd - 0.5 * (Fd @ F @ rho + rho @ Fd @ F)
    if gamma:
        c1 = H_gen @ rho - rho @ H_gen
        out = out - gamma * (H_gen @ c1 - c1 @ H_gen)
    return out


def _rk4(rho, rhs, tau, n):
    dt = tau / n
    t = 0.0
    for _ in range(n):
        k1 = rhs(rho, t)
        k2 = rhs(rho + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = rhs(rho + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = rhs(rho + dt * k3, t + dt)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
    return rho


def _adaptive(rho0, rhs, tau, omega_out, J, tol, n0, max_steps):
    n = n0
    rho = _rk4(rho0, rhs, tau, n)
    ref = observables_from_rho(rho, omega_out, J).as_array()
    while n <= max_steps:
        n *= 2
        rho = _rk4(rho0, rhs, tau, n)
        cur = observables_from_rho(rho, omega_out, J).as_array()
        if np.abs(cur - ref).max() < tol:
            return rho
        ref = cur
    raise StepTooLarge(f"integrator not converged at {max_steps} steps")


def evolve_isochore(
    rho0: np.ndarray,
    omega: float,
    J: float,
    bath: BathSegmentParams,
    tau: float | None = None,
    tol: float = 1e-9,
) -> np.ndarray:
    """Evolve under thermal contact at fixed field for time tau."""
    if tau is None:
        tau = bath.tau
    Om = big_omega(omega, J)
    H_gen = 0.5 * hamiltonian(omega, J)
    jumps = jump_operators(omega, J, bath.kappa_down, bath.kappa_up(Om))
    # dephasing acts through the same generator as the coherent part
    rhs = lambda r, t: _lindblad_rhs(r, H_gen, jumps, bath.gamma)
    rate = max(Om, bath.relaxation_rate(Om))
    n0 = max(64, int(20.0 * tau * rate))
    return _adaptive(rho0, rhs, tau, omega, J, tol, n0, 1 << 18)


def evolve_ramp(
    rho0: np.ndarray,
    J: float,
    w_from: float,
    w_to: float,
    tau: float,
    schedule: str = "constant-mu",
    tol: float = 1e-9,
) -> np.ndarray:
    """Evolve unitarily along a field ramp of the given schedule."""

    def rhs(r, t):
        w = ramp_field(J, w_from, w_to, tau, min(t, tau), schedule)
        H_gen = 0.5 * hamiltonian(w, J)
        return -1j * (H_gen @ r - r @ H_gen)

    Om_max = max(big_omega(w_from, J), big_omega(w_to, J))
    n0 = max(64, int(20.0 * tau * Om_max))
    return _adaptive(rho0, rhs, tau, w_to, J, tol, n0, 1 << 18)
