"""Working-medium model: parameters, observable vectors, state algebra.

The medium is two coupled spins.  With external field ``omega`` and fixed
coupling ``J`` the Hamiltonian has eigenvalues {-Omega, 0, 0, +Omega} with
Omega = sqrt(omega^2 + J^2).  The dynamics closes on the observable set
(E, L, C, D) extended by the unit, tracked as a 5-vector:

- E: energy expectation
- L, C: the two quadratures conjugate to the energy (coherence plane)
- D: expectation of Omega * sigma_z x sigma_z (commutes with H)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PhysicalityViolation

# eigenvalues of a reconstructed state may dip slightly below zero from
# rounding; anything above this floor is clamped, anything below is an error
EIGENVALUE_FLOOR = -1e-10


def big_omega(omega: float, J: float) -> float:
    """Single-excitation gap sqrt(omega^2 + J^2)."""
    return math.hypot(omega, J)


@dataclass(frozen=True)
class WorkingMediumParams:
    """Coupling and the two field endpoints of the cycle."""

    J: float
    omega_c: float
    omega_h: float

    def __post_init__(self) -> None:
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J}")
        if not 0 < self.omega_c < self.omega_h:
            raise ValueError(
                f"need 0 < omega_c < omega_h, got {self.omega_c}, {self.omega_h}"
            )

    @property
    def Omega_c(self) -> float:
        return big_omega(self.omega_c, self.J)

    @property
    def Omega_h(self) -> float:
        return big_omega(self.omega_h, self.J)

    @property
    def compression_ratio(self) -> float:
        return self.Omega_h / self.Omega_c


@dataclass(frozen=True)
class BathSegmentParams:
    """Thermal-contact segment: bath temperature, downward rate, optional
    pure-dephasing strength and contact duration."""

    T: float
    kappa_down: float
    tau: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not self.kappa_down > 0:
            raise ValueError(f"kappa_down must be positive, got {self.kappa_down}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")

    def kappa_up(self, Omega: float) -> float:
        # detailed balance at the bath temperature
        return self.kappa_down * math.exp(-Omega / self.T)

    def relaxation_rate(self, Omega: float) -> float:
        """Total energy relaxation rate Gamma = kappa_down + kappa_up."""
        return self.kappa_down + self.kappa_up(Omega)


@dataclass(frozen=True)
class AdiabatParams:
    """Field-ramp segment: duration and ramp scheduling."""

    tau: float
    schedule: str = "constant-mu"

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.schedule not in ("constant-mu", "linear"):
            raise ValueError(f"unknown schedule {self.schedule!r}")


@dataclass(frozen=True)
class CycleParams:
    """Full four-segment cycle specification.

    Segment order starting from the cold corner: cold contact at omega_c,
    compression ramp omega_c -> omega_h, hot contact at omega_h, expansion
    ramp omega_h -> omega_c.
    """

    medium: WorkingMediumParams
    cold: BathSegmentParams
    hot: BathSegmentParams
    ramp_up: AdiabatParams
    ramp_down: AdiabatParams

    def __post_init__(self) -> None:
        if self.cold.T > self.hot.T:
            raise ValueError(
                f"cold bath must not be hotter, got T_c={self.cold.T} T_h={self.hot.T}"
            )

    @property
    def tau_cycle(self) -> float:
        return self.cold.tau + self.ramp_up.tau + self.hot.tau + self.ramp_down.tau

    @classmethod
    def from_flat(cls, d: dict) -> "CycleParams":
        """Build from a flat mapping with keys J, omega_c, omega_h, T_c, T_h,
        kappa_down_c, kappa_down_h, gamma_c, gamma_h, tau_c, tau_h, tau_ch,
        tau_hc, schedule.  Missing gammas default to 0; missing schedule to
        constant-mu."""
        sched = d.get("schedule", "constant-mu")
        return cls(
            medium=WorkingMediumParams(d["J"], d["omega_c"], d["omega_h"]),
            cold=BathSegmentParams(
                d["T_c"], d["kappa_down_c"], d["tau_c"], d.get("gamma_c", 0.0)
            ),
            hot=BathSegmentParams(
                d["T_h"], d["kappa_down_h"], d["tau_h"], d.get("gamma_h", 0.0)
            ),
            ramp_up=AdiabatParams(d["tau_ch"], sched),
            ramp_down=AdiabatParams(d["tau_hc"], sched),
        )


@dataclass(frozen=True)
class ObservableVector:
    """Closed observable set (E, L, C, D); the affine unit component is
    implicit and always 1."""

    E: float
    L: float
    C: float
    D: float

    def as_array(self) -> np.ndarray:
        """Return the 5-component affine vector (E, L, C, D, 1)."""
        return np.array([self.E, self.L, self.C, self.D, 1.0])

    @classmethod
    def from_array(cls, v: np.ndarray) -> "ObservableVector":
        return cls(float(v[0]), float(v[1]), float(v[2]), float(v[3]))


def equilibrium_energy(Omega: float, T: float) -> float:
    """Thermal-equilibrium energy -Omega * tanh(Omega / 2T)."""
    return -Omega * math.tanh(Omega / (2.0 * T))


def equilibrium_vector(Omega: float, T: float) -> ObservableVector:
    """Gibbs-state observable vector at gap Omega and temperature T.

    Coherences vanish; D takes the value E_eq^2 / Omega fixed by the thermal
    populations."""
    E = equilibrium_energy(Omega, T)
    return ObservableVector(E, 0.0, 0.0, E * E / Omega)


def equilibrium_entropy(Omega: float, T: float) -> float:
    """Shannon entropy of the thermal level populations at gap Omega; used
    for isotherm overlays in entropy-plane diagrams."""
    x = Omega / T
    Z = 2.0 + 2.0 * math.cosh(x)
    p = np.array([math.exp(x), 1.0, 1.0, math.exp(-x)]) / Z
    return _shannon(p)


def reconstruct_density_matrix(x: ObservableVector, Omega: float) -> np.ndarray:
    """Map an observable vector back to the 4x4 density matrix in the energy
    eigenbasis ordered (-Omega, 0, 0, +Omega).

    Raises PhysicalityViolation if the result has an eigenvalue below the
    tolerance floor."""
    E, L, C, D = x.E, x.L, x.C, x.D
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = (1.0 + (D - 2.0 * E) / Omega) / 4.0
    rho[1, 1] = (1.0 - D / Omega) / 4.0
    rho[2, 2] = (1.0 - D / Omega) / 4.0
    rho[3, 3] = (1.0 + (D + 2.0 * E) / Omega) / 4.0
    rho[0, 3] = (L + 1j * C) / (2.0 * Omega)
    rho[3, 0] = (L - 1j * C) / (2.0 * Omega)
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < EIGENVALUE_FLOOR:
        raise PhysicalityViolation(
            f"negative eigenvalue {evals.min():.3e} in reconstructed state"
        )
    return rho


def _shannon(p: np.ndarray) -> float:
    # clamp tiny negatives from rounding; 0 ln 0 = 0
    p = np.clip(p.real, 0.0, None)
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def entropies(rho: np.ndarray) -> tuple[float, float]:
    """Return (S_E, S_vn): Shannon entropy of the energy-basis populations
    and the von Neumann entropy of the full state.  Natural log."""
    S_E = _shannon(np.diag(rho).real)
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < EIGENVALUE_FLOOR:
        raise PhysicalityViolation(
            f"negative eigenvalue {evals.min():.3e} in entropy input"
        )
    S_vn = _shannon(evals)
    return S_E, S_vn


def coherence_measure(x: ObservableVector, Omega: float) -> float:
    """Scalar coherence (L^2 + C^2) / (2 Omega^2); equals twice the squared
    magnitude of the off-diagonal energy-basis element."""
    return (x.L * x.L + x.C * x.C) / (2.0 * Omega * Omega)
