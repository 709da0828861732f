import math

import numpy as np
import pytest

from conftest import to_product_basis
from sudden_otto.errors import DegenerateAdiabat
from sudden_otto.lindblad import (
    evolve_isochore,
    evolve_ramp,
    gibbs_state,
    observables_from_rho,
)
from sudden_otto.model import (
    BathSegmentParams,
    ObservableVector,
    WorkingMediumParams,
    big_omega,
    equilibrium_vector,
)
from sudden_otto.propagators import (
    adiabat_propagator,
    build_segments,
    commutator_norm,
    constant_mu_matrix,
    global_propagator,
    isochore_matrix,
    linear_matrix,
    ramp_field,
)

# a state with sizable coherence at the cold field: hot-equilibrium state
# carried over by an instantaneous quench


def _coherent_state(omega_view, J, omega_prep=6.0, T_prep=15.0):
    rho = gibbs_state(omega_prep, J, T_prep)
    return rho, observables_from_rho(rho, omega_view, J)


def test_isochore_matches_integrator():
    J, omega, T, kd = 2.0, 0.1, 14.0, 0.328
    Om = big_omega(omega, J)
    bath = BathSegmentParams(T=T, kappa_down=kd, tau=0.9)
    rho0, x0 = _coherent_state(omega, J)
    U = isochore_matrix(Om, bath)
    got = U @ x0.as_array()
    rho1 = evolve_isochore(rho0, omega, J, bath, tol=1e-11)
    want = observables_from_rho(rho1, omega, J).as_array()
    assert np.abs(got[:4] - want[:4]).max() < 1e-9


def test_isochore_with_dephasing_matches_integrator():
    J, omega, T, kd = 2.5, 2.5, 2.9, 0.36
    Om = big_omega(omega, J)
    bath = BathSegmentParams(T=T, kappa_down=kd, tau=0.44, gamma=0.05)
    rho0, x0 = _coherent_state(omega, J, omega_prep=10.0, T_prep=2.9)
    got = isochore_matrix(Om, bath) @ x0.as_array()
    rho1 = evolve_isochore(rho0, omega, J, bath, tol=1e-11)
    want = observables_from_rho(rho1, omega, J).as_array()
    assert np.abs(got[:4] - want[:4]).max() < 1e-8


def test_gibbs_state_is_isochore_fixed_point():
    J, omega, T = 2.0, 0.1, 14.0
    Om = big_omega(omega, J)
    bath = BathSegmentParams(T=T, kappa_down=0.328, tau=3.7)
    x_eq = equilibrium_vector(Om, T).as_array()
    out = isochore_matrix(Om, bath) @ x_eq
    assert np.abs(out - x_eq).max() < 1e-12


def test_isochore_long_time_reaches_equilibrium():
    J, omega, T = 2.0, 0.1, 14.0
    Om = big_omega(omega, J)
    bath = BathSegmentParams(T=T, kappa_down=0.328, tau=200.0)
    _, x0 = _coherent_state(omega, J)
    out = isochore_matrix(Om, bath) @ x0.as_array()
    assert np.abs(out - equilibrium_vector(Om, T).as_array()).max() < 1e-10


def test_coherence_block_full_period_identity():
    # negligible damping, rotation angle 2*pi: (L, C) block is the identity
    J, omega = 2.0, 0.1
    Om = big_omega(omega, J)
    tau = 2.0 * math.pi / Om
    bath = BathSegmentParams(T=14.0, kappa_down=1e-30, tau=tau)
    U = isochore_matrix(Om, bath)
    assert np.abs(U[1:3, 1:3] - np.eye(2)).max() < 1e-12


def test_constant_mu_adiabat_matches_integrator():
    J, wc, wh, tau = 2.0, 0.1, 6.0, 0.00035
    rho0, x0 = _coherent_state(wc, J)
    U = constant_mu_matrix(J, wc, wh, tau)
    got = U @ x0.as_array()
    rho1 = evolve_ramp(rho0, J, wc, wh, tau, "constant-mu", tol=1e-11)
    want = observables_from_rho(rho1, wh, J).as_array()
    assert np.abs(got[:4] - want[:4]).max() < 1e-9


def test_constant_mu_adiabat_slow_matches_integrator():
    # a ramp long enough for several internal periods
    J, wc, wh, tau = 2.5, 2.5, 10.0, 0.21
    rho0, x0 = _coherent_state(wc, J, omega_prep=10.0, T_prep=2.9)
    got = constant_mu_matrix(J, wc, wh, tau) @ x0.as_array()
    rho1 = evolve_ramp(rho0, J, wc, wh, tau, "constant-mu", tol=1e-11)
    want = observables_from_rho(rho1, wh, J).as_array()
    assert np.abs(got[:4] - want[:4]).max() < 1e-8


def test_linear_adiabat_matches_integrator():
    J, wh, wc, tau = 2.5, 10.0, 2.5, 0.00744
    rho0, x0 = _coherent_state(wh, J, omega_prep=2.5, T_prep=2.175)
    got = linear_matrix(J, wh, wc, tau) @ x0.as_array()
    rho1 = evolve_ramp(rho0, J, wh, wc, tau, "linear", tol=1e-11)
    want = observables_from_rho(rho1, wc, J).as_array()
    assert np.abs(got[:4] - want[:4]).max() < 1e-8


def test_adiabat_block_is_scaled_rotation():
    # (E, L, C) block = gap ratio times an orthogonal matrix; D row scales
    # by the gap ratio exactly
    J, wc, wh, tau = 2.0, 0.1, 6.0, 0.00035
    ratio = big_omega(wh, J) / big_omega(wc, J)
    U = constant_mu_matrix(J, wc, wh, tau)
    R = U[:3, :3] / ratio
    assert np.abs(R @ R.T - np.eye(3)).max() < 1e-12
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)
    assert U[3, 3] == pytest.approx(ratio, abs=1e-14)
    assert U[3, :3].max() == 0.0 and U[3, 4] == 0.0


def test_adiabat_round_trip_preserves_invariants():
    # up then down: D returns exactly, (E, L, C) norm returns exactly
    J, wc, wh, tau = 2.0, 0.1, 6.0, 0.0007
    U = constant_mu_matrix(J, wh, wc, tau) @ constant_mu_matrix(J, wc, wh, tau)
    x0 = np.array([-1.2, 0.3, -0.4, 0.8, 1.0])
    x1 = U @ x0
    assert x1[3] == pytest.approx(x0[3], abs=1e-12)
    assert np.linalg.norm(x1[:3]) == pytest.approx(np.linalg.norm(x0[:3]), rel=1e-12)


def test_degenerate_adiabat_raises():
    with pytest.raises(DegenerateAdiabat):
        constant_mu_matrix(2.0, 1.0, 1.0, 0.1)
    with pytest.raises(DegenerateAdiabat):
        linear_matrix(2.0, 1.0, 1.0, 0.1)


def test_ramp_field_endpoints_and_monotonicity():
    J, wc, wh, tau = 2.0, 0.1, 6.0, 0.00035
    for schedule in ("constant-mu", "linear"):
        assert ramp_field(J, wc, wh, tau, 0.0, schedule) == pytest.approx(wc, abs=1e-9)
        assert ramp_field(J, wc, wh, tau, tau, schedule) == pytest.approx(
            wh, rel=1e-6
        )
        ws = [ramp_field(J, wc, wh, tau, t, schedule) for t in
              np.linspace(0.0, tau, 50)]
        assert all(a < b for a, b in zip(ws, ws[1:]))


def test_linear_matrix_converges_to_constant_mu_for_short_ramps():
    # for a very short ramp both schedules approach the same sudden limit
    J, wc, wh = 2.0, 0.1, 6.0
    U1 = constant_mu_matrix(J, wc, wh, 1e-7)
    U2 = linear_matrix(J, wc, wh, 1e-7)
    assert np.abs(U1 - U2).max() < 1e-6


def test_build_segments_order_and_global_product(fig1_params):
    segs = build_segments(fig1_params)
    assert [s.kind for s in segs] == [
        "cold-contact", "compression", "hot-contact", "expansion",
    ]
    U = global_propagator(segs)
    want = segs[3].matrix @ segs[2].matrix @ segs[1].matrix @ segs[0].matrix
    assert np.abs(U - want).max() < 1e-14
    assert U[4, 4] == 1.0 and np.abs(U[4, :4]).max() == 0.0


def test_commutator_norm_zero_and_nonzero():
    J, omega, T = 2.0, 1.3, 10.0
    Om = big_omega(omega, J)
    b1 = BathSegmentParams(T=T, kappa_down=0.3, tau=0.5)
    b2 = BathSegmentParams(T=T, kappa_down=0.7, tau=0.2)
    A = isochore_matrix(Om, b1)
    B = isochore_matrix(Om, b2)
    # same gap, same temperature: the two contact maps commute
    assert commutator_norm(A, B) < 1e-12
    hot = BathSegmentParams(T=2 * T, kappa_down=0.3, tau=0.5)
    assert commutator_norm(A, isochore_matrix(Om, hot)) > 1e-6


def test_segment_propagator_apply(fig1_params):
    segs = build_segments(fig1_params)
    x = ObservableVector(-1.0, 0.1, 0.2, 0.5)
    got = segs[0].apply(x)
    want = segs[0].matrix @ x.as_array()
    assert got.as_array() == pytest.approx(want, abs=0.0)


def test_propagator_matrix_is_read_only(fig1_params):
    segs = build_segments(fig1_params)
    with pytest.raises(ValueError):
        segs[0].matrix[0, 0] = 2.0
