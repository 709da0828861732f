"""Exact affine propagators for the four cycle segments.

Every segment acts linearly on the affine observable vector (E, L, C, D, 1),
so a segment is a 5x5 matrix.  Thermal-contact segments relax the energy
toward equilibrium while rotating and damping the coherence plane; field
ramps rotate (E, L, C) inside a Bloch-like 3-space and rescale by the gap
ratio.  The closed forms here are exact solutions of the underlying master
equation and are cross-checked against a dense integrator in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAdiabat, StepTooLarge
from .model import (
    AdiabatParams,
    BathSegmentParams,
    CycleParams,
    ObservableVector,
    WorkingMediumParams,
    big_omega,
    equilibrium_energy,
)

SEGMENT_ORDER = ("cold-contact", "compression", "hot-contact", "expansion")


@dataclass(frozen=True)
class SegmentPropagator:
    """One segment: its 5x5 affine matrix plus bookkeeping for sampling."""

    matrix: np.ndarray
    kind: str
    tau: float
    omega_exit: float

    def __post_init__(self) -> None:
        self.matrix.setflags(write=False)

    def apply(self, x: ObservableVector) -> ObservableVector:
        return ObservableVector.from_array(self.matrix @ x.as_array())


def isochore_matrix(
    Omega: float, bath: BathSegmentParams, tau: float | None = None
) -> np.ndarray:
    """Thermal-contact propagator at fixed gap Omega.

    Energy relaxes at rate Gamma toward the equilibrium value; the (L, C)
    plane rotates at angular frequency Omega and contracts at Gamma plus the
    dephasing contribution gamma * Omega^2.  The D component decays at
    2*Gamma with an energy-coupled feed-in fixed by requiring the thermal
    state to be stationary together with the dense-integrator solution.
    """
    if tau is None:
        tau = bath.tau
    Gamma = bath.relaxation_rate(Omega)
    E_eq = equilibrium_energy(Omega, bath.T)
    alpha = math.exp(-Gamma * tau)
    K = math.exp(-(Gamma + bath.gamma * Omega * Omega) * tau)
    c, s = math.cos(Omega * tau), math.sin(Omega * tau)
    a = E_eq / Omega
    U = np.zeros((5, 5))
    U[0, 0] = alpha
    U[0, 4] = E_eq * (1.0 - alpha)
    U[1, 1] = K * c
    U[1, 2] = -K * s
    U[2, 1] = K * s
    U[2, 2] = K * c
    U[3, 0] = 2.0 * a * (alpha - alpha * alpha)
    U[3, 3] = alpha * alpha
    U[3, 4] = a * E_eq * (1.0 - alpha) ** 2
    U[4, 4] = 1.0
    return U


def isochore_propagator(
    omega: float, J: float, bath: BathSegmentParams, kind: str
) -> SegmentPropagator:
    Omega = big_omega(omega, J)
    return SegmentPropagator(isochore_matrix(Omega, bath), kind, bath.tau, omega)


def _ramp_geometry(J: float, w_from: float, w_to: float, tau: float):
    """Shared constant-rate ramp quantities.

    K is the net change of omega/Omega divided by J; mu = K / tau is the
    dimensionless ramp rate (negative on demagnetization); Theta is the
    accumulated phase integral of Omega over the ramp.
    """
    O_from, O_to = big_omega(w_from, J), big_omega(w_to, J)
    K = (w_to / O_to - w_from / O_from) / J
    mu = K / tau
    Phi = math.asin(w_to / O_to) - math.asin(w_from / O_from)
    Theta = tau * Phi / K
    return O_from, O_to, K, mu, Phi, Theta


def constant_mu_matrix(J: float, w_from: float, w_to: float, tau: float) -> np.ndarray:
    """Unitary ramp propagator for the constant-rate schedule (exact).

    The (E, L, C) block is a rotation about the tilted axis (1, 0, mu)/q by
    angle q * Theta, rescaled by the gap ratio; D rescales by the gap ratio
    alone since its generator commutes with the Hamiltonian throughout.
    """
    if w_from == w_to:
        raise DegenerateAdiabat(f"ramp endpoints coincide at omega={w_from}")
    O_from, O_to, K, mu, Phi, Theta = _ramp_geometry(J, w_from, w_to, tau)
    q = math.sqrt(1.0 + mu * mu)
    c, s = math.cos(q * Theta), math.sin(q * Theta)
    q2 = q * q
    M = np.array(
        [
            [(1.0 + mu * mu * c) / q2, -mu * s / q, mu * (1.0 - c) / q2],
            [mu * s / q, c, -s / q],
            [mu * (1.0 - c) / q2, s / q, (mu * mu + c) / q2],
        ]
    )
    U = np.zeros((5, 5))
    U[:3, :3] = (O_to / O_from) * M
    U[3, 3] = O_to / O_from
    U[4, 4] = 1.0
    return U


def linear_matrix(
    J: float,
    w_from: float,
    w_to: float,
    tau: float,
    tol: float = 1e-10,
    max_slices: int = 1 << 17,
) -> np.ndarray:
    """Unitary ramp propagator for a linear-in-time field schedule.

    Composed from constant-rate sub-ramps matching the linear schedule at
    slice endpoints; the slice count doubles until the product is stable to
    ``tol`` per entry.
    """
    if w_from == w_to:
        raise DegenerateAdiabat(f"ramp endpoints coincide at omega={w_from}")

    return _linear_slices(J, w_from, w_to, tau, tol, max_slices)[0]


def _linear_product(J, w_from, w_to, tau, n):
    ws = np.linspace(w_from, w_to, n + 1)
    dt = tau / n
    U = np.eye(5)
    for i in range(n):
        U = constant_mu_matrix(J, ws[i], ws[i + 1], dt) @ U
    return U


def _linear_slices(J, w_from, w_to, tau, tol, max_slices):
    n = 64
    prev = _linear_product(J, w_from, w_to, tau, n)
    while n <= max_slices:
        n *= 2
        cur = _linear_product(J, w_from, w_to, tau, n)
        if np.abs(cur - prev).max() < tol:
            return cur, n
        prev = cur
    raise StepTooLarge(f"linear ramp not converged at {max_slices} slices")


def linear_partials(
    J: float, w_from: float, w_to: float, tau: float, ts, tol: float = 1e-10
) -> list[np.ndarray]:
    """Propagators from ramp start to each time in the ascending sequence
    ``ts``, sharing one converged slicing of the full linear ramp."""
    _, n = _linear_slices(J, w_from, w_to, tau, tol, 1 << 17)
    ws = np.linspace(w_from, w_to, n + 1)
    dt = tau / n
    out = []
    U = np.eye(5)
    k = 0  # completed slices folded into U
    for t in ts:
        target = min(int(t / dt), n)
        while k < target:
            U = constant_mu_matrix(J, ws[k], ws[k + 1], dt) @ U
            k += 1
        rem = t - k * dt
        w_t = w_from + (w_to - w_from) * (t / tau)
        if rem > 0 and k < n and w_t != ws[k]:
            out.append(constant_mu_matrix(J, ws[k], w_t, rem) @ U)
        else:
            out.append(U.copy())
    return out


def adiabat_propagator(
    medium: WorkingMediumParams, direction: str, params: AdiabatParams
) -> SegmentPropagator:
    """Field-ramp propagator.  ``direction`` is "up" (omega_c -> omega_h,
    compression) or "down" (expansion)."""
    if direction == "up":
        w_from, w_to, kind = medium.omega_c, medium.omega_h, "compression"
    elif direction == "down":
        w_from, w_to, kind = medium.omega_h, medium.omega_c, "expansion"
    else:
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    if params.schedule == "constant-mu":
        U = constant_mu_matrix(medium.J, w_from, w_to, params.tau)
    else:
        U = linear_matrix(medium.J, w_from, w_to, params.tau)
    return SegmentPropagator(U, kind, params.tau, w_to)


def ramp_field(
    J: float, w_from: float, w_to: float, tau: float, t: float, schedule: str
) -> float:
    """Instantaneous field at time t in [0, tau] along the ramp."""
    if schedule == "linear":
        return w_from + (w_to - w_from) * (t / tau)
    O_from = big_omega(w_from, J)
    _, _, K, mu, _, _ = _ramp_geometry(J, w_from, w_to, tau)
    u = w_from / O_from + J * mu * t
    u = min(max(u, -1.0 + 1e-15), 1.0 - 1e-15)
    return J * u / math.sqrt(1.0 - u * u)


def build_segments(
    params: CycleParams,
) -> tuple[SegmentPropagator, SegmentPropagator, SegmentPropagator, SegmentPropagator]:
    """The four segment propagators in cycle order starting at the cold
    corner."""
    m = params.medium
    return (
        isochore_propagator(m.omega_c, m.J, params.cold, "cold-contact"),
        adiabat_propagator(m, "up", params.ramp_up),
        isochore_propagator(m.omega_h, m.J, params.hot, "hot-contact"),
        adiabat_propagator(m, "down", params.ramp_down),
    )


def global_propagator(segments) -> np.ndarray:
    """One-cycle 5x5 map referenced to the start of the first segment."""
    U = np.eye(5)
    for seg in segments:
        U = seg.matrix @ U
    return U


def commutator_norm(A: np.ndarray, B: np.ndarray) -> float:
    """Max-abs-entry norm of the commutator of two segment matrices."""
    return float(np.abs(A @ B - B @ A).max())
