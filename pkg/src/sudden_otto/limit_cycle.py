"""Periodic steady state of the four-segment cycle and its thermodynamics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MarginalCycle, NoConvergence
from .model import (
    CycleParams,
    ObservableVector,
    big_omega,
    coherence_measure,
    entropies,
    reconstruct_density_matrix,
)
from .propagators import (
    SegmentPropagator,
    build_segments,
    constant_mu_matrix,
    global_propagator,
    isochore_matrix,
    linear_partials,
    ramp_field,
)

_SINGULAR_TOL = 1e-12


def fixed_point(U_global: np.ndarray) -> ObservableVector:
    """Invariant observable vector of the one-cycle map.

    Solves (I - M) x = b where M is the homogeneous 4x4 block and b the
    affine column.  Raises MarginalCycle when the map has a unit eigenvalue
    and the invariant vector is not unique.
    """
    M = U_global[:4, :4]
    b = U_global[:4, 4]
    A = np.eye(4) - M
    smin = np.linalg.svd(A, compute_uv=False)[-1]
    if smin < _SINGULAR_TOL * (1.0 + np.abs(M).max()):
        raise MarginalCycle(f"one-cycle map is marginal (s_min={smin:.3e})")
    return ObservableVector.from_array(np.append(np.linalg.solve(A, b), 1.0))


def iterate_to_limit(
    x0: ObservableVector,
    U_global: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 10**6,
) -> tuple[ObservableVector, int]:
    """Reach the periodic steady state by repeated cycle application.

    Returns (limit vector, number of cycles).  Convergence is declared when
    the vector moves less than ``tol`` in max norm over one cycle.
    """
    v = x0.as_array()
    for n in range(1, max_iter + 1):
        w = U_global @ v
        if np.abs(w - v).max() < tol:
            return ObservableVector.from_array(w), n
        v = w
    raise NoConvergence(f"no limit cycle within {max_iter} iterations")


def spectral_gap(U_global: np.ndarray) -> float:
    """1 minus the largest contraction-eigenvalue modulus; sets the
    relaxation rate toward the limit cycle."""
    evals = np.linalg.eigvals(U_global[:4, :4])
    return float(1.0 - np.abs(evals).max())


def corner_states(
    x_A: ObservableVector, segments
) -> dict[str, ObservableVector]:
    """Observable vectors at the four cycle corners: A before cold contact,
    B after it, C after compression, D after hot contact."""
    out = {"A": x_A}
    x = x_A
    for name, seg in zip("BCD", segments[:3]):
        x = seg.apply(x)
        out[name] = x
    return out


@dataclass(frozen=True)
class CycleReport:
    """Limit-cycle thermodynamics for one parameter set.

    Sign conventions: Q_c and Q_h are heats absorbed by the medium from the
    cold and hot baths; W_on is work done on the medium per cycle.  A
    refrigerator has Q_c > 0 and W_on > 0.
    """

    params: CycleParams
    corners: dict[str, ObservableVector]
    Q_c: float
    Q_h: float
    W_on: float
    P_c: float
    cop: float | None
    entropy_production: float
    refrigerating: bool
    spectral_gap: float
    closure_residual: float
    cop_otto_bound: float
    cop_carnot_bound: float

    @property
    def status(self) -> str:
        return "refrigerating" if self.refrigerating else "non-refrigerating"


def cycle_report(params: CycleParams) -> CycleReport:
    """Build segments, solve for the limit cycle and evaluate per-cycle
    heats, work, cooling power, COP and entropy production."""
    segments = build_segments(params)
    U = global_propagator(segments)
    x_A = fixed_point(U)
    corners = corner_states(x_A, segments)
    x_back = segments[3].apply(corners["D"])
    closure = max(
        abs(getattr(x_back, k) - getattr(x_A, k)) for k in ("E", "L", "C", "D")
    )

    Q_c = corners["B"].E - corners["A"].E
    W_on = (corners["C"].E - corners["D"].E) - Q_c
    Q_h = -(Q_c + W_on)
    refrig = Q_c > 0.0 and W_on > 0.0
    cop = Q_c / W_on if refrig else None
    S_u = -(Q_c / params.cold.T + Q_h / params.hot.T)
    m = params.medium
    return CycleReport(
        params=params,
        corners=corners,
        Q_c=Q_c,
        Q_h=Q_h,
        W_on=W_on,
        P_c=Q_c / params.tau_cycle,
        cop=cop,
        entropy_production=S_u,
        refrigerating=refrig,
        spectral_gap=spectral_gap(U),
        closure_residual=closure,
        cop_otto_bound=m.Omega_c / (m.Omega_h - m.Omega_c),
        cop_carnot_bound=(
            params.cold.T / (params.hot.T - params.cold.T)
            if params.hot.T > params.cold.T
            else math.inf
        ),
    )


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    segment: str
    omega: float
    Omega: float
    E: float
    L: float
    C: float
    D: float
    S_E: float
    S_vn: float
    coherence: float


def _partial_matrices(params: CycleParams, seg: SegmentPropagator, ts):
    """Propagators for the first t time units of a segment, one per sample
    time, paired with the instantaneous field."""
    m = params.medium
    if seg.kind == "cold-contact":
        return [(isochore_matrix(m.Omega_c, params.cold, t), m.omega_c) for t in ts]
    if seg.kind == "hot-contact":
        return [(isochore_matrix(m.Omega_h, params.hot, t), m.omega_h) for t in ts]
    if seg.kind == "compression":
        w_from, w_to, ap = m.omega_c, m.omega_h, params.ramp_up
    else:
        w_from, w_to, ap = m.omega_h, m.omega_c, params.ramp_down
    fields = [
        w_from if t == 0.0 else ramp_field(m.J, w_from, w_to, ap.tau, t, ap.schedule)
        for t in ts
    ]
    if ap.schedule == "linear":
        mats = linear_partials(m.J, w_from, w_to, ap.tau, ts)
        return list(zip(mats, fields))
    out = []
    for t, w_t in zip(ts, fields):
        if t == 0.0:
            out.append((np.eye(5), w_from))
        else:
            out.append((constant_mu_matrix(m.J, w_from, w_t, t), w_t))
    return out


def trajectory(
    params: CycleParams, samples_per_segment: int = 200
) -> list[TrajectoryPoint]:
    """Sample the limit cycle densely in time.

    Each segment contributes ``samples_per_segment`` points (segment start
    included, end excluded); a final point closes the cycle.  Entropies are
    evaluated on the reconstructed state at the instantaneous gap.
    """
    segments = build_segments(params)
    x_A = fixed_point(global_propagator(segments))
    rows: list[TrajectoryPoint] = []
    t0 = 0.0
    x = x_A

    def emit(t_abs, seg_name, omega, vec):
        Om = big_omega(omega, params.medium.J)
        ov = ObservableVector.from_array(vec)
        S_E, S_vn = entropies(reconstruct_density_matrix(ov, Om))
        rows.append(
            TrajectoryPoint(
                t_abs, seg_name, omega, Om, ov.E, ov.L, ov.C, ov.D,
                S_E, S_vn, coherence_measure(ov, Om),
            )
        )

    for seg in segments:
        v0 = x.as_array()
        ts = [seg.tau * k / samples_per_segment for k in range(samples_per_segment)]
        for t, (P, w_t) in zip(ts, _partial_matrices(params, seg, ts)):
            emit(t0 + t, seg.kind, w_t, P @ v0)
        x = seg.apply(x)
        t0 += seg.tau
    emit(t0, "cold-contact", params.medium.omega_c, x.as_array())
    return rows
