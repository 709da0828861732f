"""Closed-form short-time approximations.

The exact segment propagators admit a ladder of simplifications valid in
different corners of parameter space.  The ramp classes are organized by the
size of the field endpoints relative to the coupling J:

- sudden-generic: fast-ramp limit |mu| >> 1, (E, L) rotate by the net angle
- class-1:        omega_c << J << omega_h, the rotation angle is a quarter turn
- class-2:        omega_c ~ J << omega_h
- class-3a:       omega_c, omega_h >> J and a very short ramp (scaled identity)
- class-3b:       omega_c, omega_h >> J with ramp time of order one

Contact segments are truncated at zeroth (frozen rotation), first or second
order in the contact time.  Combining the truncated propagators and solving
for the invariant vector yields closed-form cooling estimates qc_appr*,
work, COP and entropy-production estimates, and the analytic location of
the cooling-power maximum over inverse cold temperature.

All functions here are pure; regime checks warn (RegimeWarning) when a
parameter is marginal and raise only on outright violations.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .errors import ClassInapplicable, NoMaximum, RegimeViolation
from .model import (
    BathSegmentParams,
    CycleParams,
    WorkingMediumParams,
    big_omega,
    equilibrium_energy,
)
from .propagators import SegmentPropagator, _ramp_geometry

ADIABAT_CLASSES = ("sudden-generic", "class-1", "class-2", "class-3a", "class-3b")

ISOCHORE_ORDERS = ("frozen-rotation", "first-order", "second-order")


class RegimeWarning(UserWarning):
    """A closed form was evaluated near or past the edge of its regime."""


def _warn(msg: str) -> None:
    warnings.warn(msg, RegimeWarning, stacklevel=3)


def class_applicability(tag: str, medium: WorkingMediumParams) -> tuple[bool, bool]:
    """Return (hard_ok, comfortably_inside) for a ramp class.

    Hard failure means the defining ordering is violated (e.g. class-1 with
    omega_c > J); comfortably inside applies factor-10 for "<<" and factor-3
    for ">>".
    """
    J, wc, wh = medium.J, medium.omega_c, medium.omega_h
    if tag == "sudden-generic":
        return True, True
    if tag == "class-1":
        return (wc <= J and wh >= J), (wc <= J / 10.0 and wh >= 3.0 * J)
    if tag == "class-2":
        return (wh >= J), (J / math.sqrt(2.0) * 0.9 <= wc <= 1.1 * J and wh >= 3.0 * J)
    if tag in ("class-3a", "class-3b"):
        return (wc >= J), (wc >= 3.0 * J and wh >= 3.0 * J)
    raise ValueError(f"unknown ramp class {tag!r}")


def _rotation_5x5(ratio: float, phi: float) -> np.ndarray:
    """(E, L) rotation by phi with gap rescaling; C and D carry the gap
    ratio unchanged."""
    c, s = math.cos(phi), math.sin(phi)
    U = np.zeros((5, 5))
    U[0, 0], U[0, 1] = ratio * c, -ratio * s
    U[1, 0], U[1, 1] = ratio * s, ratio * c
    U[2, 2] = ratio
    U[3, 3] = ratio
    U[4, 4] = 1.0
    return U


def approx_adiabat_matrix(
    tag: str, medium: WorkingMediumParams, direction: str, tau: float
) -> np.ndarray:
    """Approximate ramp propagator of the given class.

    ``direction`` is "up" (omega_c -> omega_h) or "down".  Raises
    ClassInapplicable on hard regime violation, warns when marginal.
    """
    hard, soft = class_applicability(tag, medium)
    if not hard:
        raise ClassInapplicable(f"{tag} inapplicable for {medium}")
    if not soft:
        _warn(f"{tag} marginal for J={medium.J}, "
              f"omega=({medium.omega_c}, {medium.omega_h})")
    if direction == "up":
        w_from, w_to = medium.omega_c, medium.omega_h
    elif direction == "down":
        w_from, w_to = medium.omega_h, medium.omega_c
    else:
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    O_from, O_to, K, mu, Phi, _ = _ramp_geometry(medium.J, w_from, w_to, tau)
    ratio = O_to / O_from

    if tag == "sudden-generic":
        return _rotation_5x5(ratio, Phi)
    if tag == "class-1":
        return _rotation_5x5(ratio, math.copysign(math.pi / 2.0, Phi))
    if tag == "class-2":
        # printed quarter-of-a-half turn only at omega_c = J exactly
        if medium.omega_c == medium.J:
            return _rotation_5x5(ratio, math.copysign(math.pi / 4.0, Phi))
        return _rotation_5x5(ratio, Phi)
    if tag == "class-3a":
        U = np.zeros((5, 5))
        U[0, 0] = U[1, 1] = U[2, 2] = U[3, 3] = ratio
        U[4, 4] = 1.0
        return U
    # class-3b: keep mu to first order, unit-rate phase tau * J
    c, s = math.cos(tau * medium.J), math.sin(tau * medium.J)
    U = np.zeros((5, 5))
    U[:3, :3] = ratio * np.array(
        [
            [1.0, -mu * s, mu * (1.0 - c)],
            [mu * s, c, -s],
            [mu * (1.0 - c), s, c],
        ]
    )
    U[3, 3] = ratio
    U[4, 4] = 1.0
    return U


def approx_adiabat_propagator(
    tag: str, medium: WorkingMediumParams, direction: str, tau: float
) -> SegmentPropagator:
    kind = "compression" if direction == "up" else "expansion"
    w_exit = medium.omega_h if direction == "up" else medium.omega_c
    return SegmentPropagator(
        approx_adiabat_matrix(tag, medium, direction, tau), kind, tau, w_exit
    )


def approx_isochore_matrix(
    order: str, Omega: float, bath: BathSegmentParams, tau: float | None = None
) -> np.ndarray:
    """Truncated thermal-contact propagator.

    All orders drop the pure-dephasing term.  The truncations expand the
    exact matrix, so the entrywise error is O((Gamma tau)^{n+1}) and
    decreases with order.
    """
    if tau is None:
        tau = bath.tau
    Gamma = bath.relaxation_rate(Omega)
    E_eq = equilibrium_energy(Omega, bath.T)
    G = Gamma * tau
    a = E_eq / Omega
    b = E_eq * E_eq / Omega
    U = np.zeros((5, 5))
    U[4, 4] = 1.0
    if order == "frozen-rotation":
        alpha = math.exp(-G)
        U[0, 0] = alpha
        U[0, 4] = E_eq * (1.0 - alpha)
        U[1, 1] = U[2, 2] = alpha
        U[3, 0] = 2.0 * a * (alpha - alpha * alpha)
        U[3, 3] = alpha * alpha
        U[3, 4] = b * (1.0 - alpha) ** 2
        return U
    if order == "first-order":
        if G > 1.0:
            _warn(f"first-order contact truncation with Gamma*tau={G:.3g} > 1")
        U[0, 0] = 1.0 - G
        U[0, 4] = E_eq * G
        U[1, 1] = U[2, 2] = 1.0 - G
        U[1, 2] = -Omega * tau
        U[2, 1] = Omega * tau
        U[3, 0] = 2.0 * a * G
        U[3, 3] = 1.0 - 2.0 * G
        return U
    if order == "second-order":
        if G > 1.0 or Omega * tau > 1.0:
            _warn(
                f"second-order contact truncation with Gamma*tau={G:.3g}, "
                f"Omega*tau={Omega * tau:.3g}"
            )
        U[0, 0] = 1.0 - G + G * G / 2.0
        U[0, 4] = E_eq * (G - G * G / 2.0)
        diag = 1.0 - G + (Gamma * Gamma - Omega * Omega) * tau * tau / 2.0
        off = Omega * tau - Gamma * Omega * tau * tau
        U[1, 1] = U[2, 2] = diag
        U[1, 2] = -off
        U[2, 1] = off
        U[3, 0] = 2.0 * a * (G - 1.5 * G * G)
        U[3, 3] = 1.0 - 2.0 * G + 2.0 * G * G
        U[3, 4] = b * G * G
        return U
    raise ValueError(f"unknown contact truncation order {order!r}")


def approx_isochore_propagator(
    order: str, omega: float, J: float, bath: BathSegmentParams, kind: str = "contact"
) -> SegmentPropagator:
    Omega = big_omega(omega, J)
    return SegmentPropagator(
        approx_isochore_matrix(order, Omega, bath), kind, bath.tau, omega
    )


# ---------------------------------------------------------------------------
# closed-form cooling estimates


def _pieces(params: CycleParams):
    m = params.medium
    Om_c, Om_h = m.Omega_c, m.Omega_h
    G_c = params.cold.relaxation_rate(Om_c)
    G_h = params.hot.relaxation_rate(Om_h)
    E_c = equilibrium_energy(Om_c, params.cold.T)
    E_h = equilibrium_energy(Om_h, params.hot.T)
    return Om_c, Om_h, G_c, G_h, E_c, E_h


def _case1_check(params: CycleParams) -> None:
    hard, soft = class_applicability("class-1", params.medium)
    if not soft:
        _warn("cooling estimate outside the omega_c << J << omega_h regime")
    if params.hot.tau > 0.5 * params.cold.tau:
        _warn("cooling estimate assumes tau_c / tau_h >> 1")


def qc_appr1(params: CycleParams) -> float:
    """Per-cycle cold heat in the quarter-turn ramp regime, including the
    small dissipative correction term."""
    return qc_appr1b(params) + qc_correction_term(params)


def qc_correction_term(params: CycleParams) -> float:
    Om_c, Om_h, G_c, G_h, E_c, E_h = _pieces(params)
    tau_c, tau_h = params.cold.tau, params.hot.tau
    alpha = math.exp(-G_c * tau_c)
    cc = math.cos(Om_c * tau_c)
    return (2.0 * alpha * tau_h**2 * G_h**2 * E_c * (alpha - cc)) / (alpha - 1.0)


def qc_appr1b(params: CycleParams) -> float:
    """Leading term of qc_appr1; the dropped term is typically two orders of
    magnitude smaller."""
    _case1_check(params)
    Om_c, Om_h, G_c, G_h, E_c, E_h = _pieces(params)
    tau_c, tau_h = params.cold.tau, params.hot.tau
    alpha = math.exp(-G_c * tau_c)
    cc = math.cos(Om_c * tau_c)
    ss = math.sin(Om_c * tau_c)
    num = alpha * tau_h**2 * (
        Om_c * ss * E_h * G_h - Om_h**2 * E_c * cc + E_c * alpha * Om_h**2
    )
    return -num / (alpha**2 - 2.0 * alpha * cc + 1.0)


def sign_switch_roots(
    medium: WorkingMediumParams,
    bath_c: BathSegmentParams,
    tau_range: tuple[float, float],
) -> list[float]:
    """Predicted cooling sign-switch locations in tau_c: crossings of
    exp(-Gamma_c tau) with cos(Omega_c tau).

    Pre-scans a uniform grid and bisects each bracketed crossing.  Returns
    an empty list when there is no crossing in range.
    """
    from scipy.optimize import brentq

    Om_c = medium.Omega_c
    G_c = bath_c.relaxation_rate(Om_c)

    def f(t):
        return math.exp(-G_c * t) - math.cos(Om_c * t)

    lo, hi = tau_range
    grid = np.linspace(lo, hi, 10_000)
    vals = np.array([f(t) for t in grid])
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(float(brentq(f, grid[i], grid[i + 1], xtol=1e-14)))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def qc_appr2(params: CycleParams) -> float:
    """Per-cycle cold heat when omega_c ~ J << omega_h with second-order
    contact truncations."""
    hard, soft = class_applicability("class-2", params.medium)
    if not soft:
        _warn("qc_appr2 outside the omega_c ~ J << omega_h regime")
    Om_c, Om_h, G_c, G_h, E_c, E_h = _pieces(params)
    gc = G_c * params.cold.tau
    gh = G_h * params.hot.tau
    num = (E_c - Om_c * E_h / Om_h) * (gc - 0.5 * gc * gc) * (gh - 0.5 * gh * gh)
    den = (gc + gh) - 0.5 * (gc + gh) ** 2
    return num / den


def qc_appr3a(params: CycleParams) -> float:
    """Per-cycle cold heat for very short ramps with both fields large; the
    energy decouples from the coherence plane."""
    hard, soft = class_applicability("class-3a", params.medium)
    if not soft:
        _warn("qc_appr3a outside the omega_c, omega_h >> J regime")
    Om_c, Om_h, G_c, G_h, E_c, E_h = _pieces(params)
    gc = G_c * params.cold.tau
    gh = G_h * params.hot.tau
    total = gc + gh
    if total >= 2.0:
        raise RegimeViolation(
            f"qc_appr3a needs Gamma_c tau_c + Gamma_h tau_h < 2, got {total:.3g}"
        )
    return E_h * ((E_c / E_h - Om_c / Om_h) * gc * gh) / (total - total * total)


def qc_appr3b(params: CycleParams) -> float:
    """Per-cycle cold heat with both fields large and order-one ramp time;
    the ramp rate enters only through mu^2."""
    hard, soft = class_applicability("class-3b", params.medium)
    if not soft:
        _warn("qc_appr3b outside the omega_c, omega_h >> J regime")
    m = params.medium
    Om_c, Om_h, G_c, G_h, E_c, E_h = _pieces(params)
    tau_adi = params.ramp_down.tau
    # mu from the demagnetization direction; only mu^2 enters
    _, _, _, mu, _, _ = _ramp_geometry(m.J, m.omega_h, m.omega_c, tau_adi)
    c = math.cos(m.J * tau_adi)
    A_c = math.exp(-G_c * params.cold.tau)
    A_h = math.exp(-G_h * params.hot.tau)
    gc = G_c * params.cold.tau
    gh = G_h * params.hot.tau
    mu2 = mu * mu
    num = (E_c / E_h - Om_c / Om_h) * gc * gh - 2.0 * (E_c / E_h) * (
        1.0 - A_c
    ) * A_h * mu2 * (1.0 - c)
    den = 1.0 - A_h * A_c * (1.0 + 2.0 * mu2 * (1.0 - c))
    return E_h * num / den


def work_first_order(params: CycleParams) -> float:
    """Per-cycle work input to leading order in the hot contact time; the
    input happens on the magnetization ramp and is dissipated at the hot
    bath."""
    _, _, _, G_h, _, E_h = _pieces(params)
    return -params.hot.tau * E_h * G_h


def work_appr(params: CycleParams) -> float:
    """Per-cycle work input in the quarter-turn regime, through second order
    in the hot contact time."""
    _case1_check(params)
    Om_c, Om_h, G_c, G_h, E_c, E_h = _pieces(params)
    tau_c, tau_h = params.cold.tau, params.hot.tau
    alpha = math.exp(-G_c * tau_c)
    cc = math.cos(Om_c * tau_c)
    ss = math.sin(Om_c * tau_c)
    poly = alpha**2 - 2.0 * alpha * cc + 1.0
    num = tau_h * E_h * G_h * (1.0 - alpha) * poly + tau_h**2 * (
        E_h * G_h**2 * alpha**2 * ss**2 * (2.0 * alpha - 1.0)
        - (Om_h**2 / Om_c) * ss * G_h * E_c * alpha * (1.0 - alpha)
    )
    den = (
        (alpha - 1.0) * poly
        + Om_h**2 * tau_h**2 * alpha**2 * (alpha - cc)
        - alpha**2 * G_h * tau_h * (alpha - 2.0 * alpha * G_h * tau_h + 2.0 * G_h * tau_h * cc)
    )
    return num / den - qc_appr1b(params)


def cop_appr(params: CycleParams) -> float:
    """Coefficient of performance in the quarter-turn regime."""
    _case1_check(params)
    Om_c, Om_h, G_c, G_h, E_c, E_h = _pieces(params)
    tau_c, tau_h = params.cold.tau, params.hot.tau
    alpha = math.exp(-G_c * tau_c)
    cc = math.cos(Om_c * tau_c)
    ss = math.sin(Om_c * tau_c)
    num = alpha * (Om_c * ss * E_h * G_h - Om_h**2 * E_c * cc + E_c * alpha * Om_h**2)
    return tau_h * num / (E_h * G_h * (alpha**2 - 2.0 * alpha * cc + 1.0))


def su_appr(params: CycleParams) -> float:
    """Per-cycle entropy production estimate; dominated by the hot-contact
    term work_first_order / T_h."""
    _case1_check(params)
    Om_c, Om_h, G_c, G_h, E_c, E_h = _pieces(params)
    tau_c, tau_h = params.cold.tau, params.hot.tau
    alpha = math.exp(-G_c * tau_c)
    cc = math.cos(Om_c * tau_c)
    ss = math.sin(Om_c * tau_c)
    first = (
        alpha
        * tau_h**2
        * (Om_c * ss * E_h * G_h - Om_h**2 * E_c * cc + E_c * alpha * Om_h**2)
        / ((alpha**2 - 2.0 * alpha * cc + 1.0) * params.cold.T)
    )
    return -(first + tau_h * E_h * G_h / params.hot.T)


def max_cooling_point(J: float, kappa_down_c: float, tau_c: float) -> float:
    """Analytic location of the cooling-power maximum over x = J / 2 T_c at
    fixed cold-to-hot temperature ratio.

    Only cold-segment parameters enter.  Raises NoMaximum when
    2 J kappa_down_c tau_c <= 1, where the closed form predicts no interior
    maximum.
    """
    g = 2.0 * J * kappa_down_c * tau_c
    if g <= 1.0:
        raise NoMaximum(f"needs 2 J kappa_down_c tau_c > 1, got {g:.3g}")
    return -0.25 * math.log(1.0 - 1.0 / g)


def max_cooling_residual(J: float, kappa_down_c: float, tau_c: float, x: float) -> float:
    """Stationarity residual of the log cooling estimate at x; vanishes at
    the max_cooling_point output."""
    kt = kappa_down_c * tau_c
    return (
        2.0 * kt * math.exp(-2.0 * x)
        + 1.0 / (2.0 * J * math.sinh(2.0 * x))
        - 4.0 * kt * math.exp(-2.0 * x)
    )
