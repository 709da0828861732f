import math
import warnings

import numpy as np
import pytest

from sudden_otto.approx import (
    RegimeWarning,
    approx_adiabat_matrix,
    approx_isochore_matrix,
    class_applicability,
    cop_appr,
    max_cooling_point,
    max_cooling_residual,
    qc_appr1,
    qc_appr1b,
    qc_appr2,
    qc_appr3a,
    qc_appr3b,
    qc_correction_term,
    sign_switch_roots,
    su_appr,
    work_appr,
    work_first_order,
)
from sudden_otto.config import load_preset
from sudden_otto.errors import ClassInapplicable, NoMaximum, RegimeViolation
from sudden_otto.limit_cycle import cycle_report
from sudden_otto.model import (
    BathSegmentParams,
    CycleParams,
    WorkingMediumParams,
)
from sudden_otto.propagators import constant_mu_matrix, isochore_matrix


def _sweep_point(preset, index):
    cfg = load_preset(preset)
    return CycleParams.from_flat(cfg.sweep_spec().resolve(index))


# ---------------------------------------------------------------------------
# ramp classes


def test_class_applicability_orderings():
    deep = WorkingMediumParams(2.0, 0.1, 6.0)
    assert class_applicability("sudden-generic", deep) == (True, True)
    assert class_applicability("class-1", deep) == (True, True)
    hard, soft = class_applicability("class-1", WorkingMediumParams(2.0, 1.0, 6.0))
    assert hard and not soft
    hard, _ = class_applicability("class-1", WorkingMediumParams(2.0, 3.0, 6.0))
    assert not hard
    hard, _ = class_applicability("class-3a", WorkingMediumParams(2.0, 1.0, 6.0))
    assert not hard
    with pytest.raises(ValueError):
        class_applicability("class-9", deep)


def test_sudden_generic_tracks_exact_fast_ramp(fig1_params):
    m = fig1_params.medium
    for direction, w_from, w_to, tau in (
        ("up", m.omega_c, m.omega_h, fig1_params.ramp_up.tau),
        ("down", m.omega_h, m.omega_c, fig1_params.ramp_down.tau),
    ):
        exact = constant_mu_matrix(m.J, w_from, w_to, tau)
        appr = approx_adiabat_matrix("sudden-generic", m, direction, tau)
        assert np.abs(appr - exact).max() < 3e-3 * np.abs(exact).max()


def test_ladder_sharpening_on_ramps(fig1_params):
    # the generic sudden form retains the true rotation angle and beats the
    # fixed quarter-turn form everywhere in its regime
    m = fig1_params.medium
    tau = fig1_params.ramp_up.tau
    exact = constant_mu_matrix(m.J, m.omega_c, m.omega_h, tau)
    err_gen = np.abs(
        approx_adiabat_matrix("sudden-generic", m, "up", tau) - exact
    ).max()
    err_c1 = np.abs(approx_adiabat_matrix("class-1", m, "up", tau) - exact).max()
    assert err_gen < err_c1


def test_class1_quarter_turn_structure():
    m = WorkingMediumParams(2.0, 0.1, 6.0)
    up = approx_adiabat_matrix("class-1", m, "up", 1e-4)
    ratio = m.Omega_h / m.Omega_c
    # (E, L) block is a pure quarter turn scaled by the gap ratio
    assert up[0, 0] == pytest.approx(0.0, abs=1e-15)
    assert up[1, 0] == pytest.approx(ratio, rel=1e-14)
    assert up[0, 1] == pytest.approx(-ratio, rel=1e-14)
    # the return ramp undoes the turn: composed rotation block is the identity
    down = approx_adiabat_matrix("class-1", m, "down", 1e-4)
    both = down @ up
    assert np.abs(both[:3, :3] - np.eye(3)).max() < 1e-12
    assert both[3, 3] == pytest.approx(1.0, abs=1e-14)


def test_class3b_full_period_reduces_to_class3a():
    m = WorkingMediumParams(1.25, 6.5, 11.0)
    tau = 2.0 * math.pi / m.J
    a = approx_adiabat_matrix("class-3a", m, "down", tau)
    b = approx_adiabat_matrix("class-3b", m, "down", tau)
    assert np.abs(a - b).max() < 1e-12


def test_class3b_rotation_block_structure():
    m = WorkingMediumParams(1.25, 6.5, 11.0)
    tau = 0.466
    U = approx_adiabat_matrix("class-3b", m, "down", tau)
    ratio = m.Omega_c / m.Omega_h
    c = math.cos(m.J * tau)
    assert U[1, 1] == pytest.approx(ratio * c, rel=1e-12)
    assert U[2, 2] == pytest.approx(ratio * c, rel=1e-12)
    assert U[1, 2] == pytest.approx(-U[2, 1], rel=1e-12)
    assert U[0, 0] == pytest.approx(ratio, rel=1e-12)


def test_class_hard_violations_raise():
    # quarter-turn form needs the field to cross the coupling
    with pytest.raises(ClassInapplicable):
        approx_adiabat_matrix("class-1", WorkingMediumParams(2.0, 3.0, 6.0), "up", 0.1)
    # large-field forms need both endpoints above the coupling
    with pytest.raises(ClassInapplicable):
        approx_adiabat_matrix("class-3a", WorkingMediumParams(2.0, 0.5, 6.0), "up", 0.1)
    with pytest.raises(ClassInapplicable):
        approx_adiabat_matrix("class-3b", WorkingMediumParams(2.0, 0.5, 6.0), "up", 0.1)


def test_marginal_regime_warns():
    with pytest.warns(RegimeWarning):
        approx_adiabat_matrix("class-1", WorkingMediumParams(2.0, 1.0, 6.0), "up", 0.1)


# ---------------------------------------------------------------------------
# contact truncations


def test_isochore_truncations_approach_identity():
    b = BathSegmentParams(T=2.9, kappa_down=0.36, tau=1e-9)
    for order in ("frozen-rotation", "first-order", "second-order"):
        U = approx_isochore_matrix(order, 10.3, b)
        assert np.abs(U[:4, :4] - np.eye(4)).max() < 1e-7


def test_isochore_first_order_error_scaling():
    # entrywise error shrinks like (Gamma tau)^2 when tau is halved
    Om = 10.3
    errs = []
    for tau in (0.02, 0.01):
        b = BathSegmentParams(T=2.9, kappa_down=0.36, tau=tau)
        exact = isochore_matrix(Om, b)
        appr = approx_isochore_matrix("first-order", Om, b)
        errs.append(np.abs(appr - exact).max())
    assert errs[1] < errs[0] / 3.0


def test_isochore_truncation_order_improves():
    Om = 10.30776461203342
    b = BathSegmentParams(T=2.9, kappa_down=0.36, tau=0.02)
    exact = isochore_matrix(Om, b)
    errs = [
        np.abs(approx_isochore_matrix(o, Om, b) - exact).max()
        for o in ("frozen-rotation", "first-order", "second-order")
    ]
    assert errs[0] > errs[1] > errs[2]


def test_frozen_rotation_keeps_populations_exact():
    # the zeroth-order form truncates only the coherence rotation, so the
    # energy relaxation column is the exact one
    Om = 10.3
    b = BathSegmentParams(T=2.9, kappa_down=0.36, tau=0.4)
    exact = isochore_matrix(Om, b)
    appr = approx_isochore_matrix("frozen-rotation", Om, b)
    assert appr[0, 0] == pytest.approx(exact[0, 0], rel=1e-14)
    assert appr[0, 4] == pytest.approx(exact[0, 4], rel=1e-14)


def test_isochore_truncation_warns_when_contact_long():
    b = BathSegmentParams(T=2.9, kappa_down=0.36, tau=5.0)
    with pytest.warns(RegimeWarning):
        approx_isochore_matrix("first-order", 10.3, b)


# ---------------------------------------------------------------------------
# cooling estimates


def test_qc_appr1_splits_into_leading_and_correction(fig1_params):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        total = qc_appr1(fig1_params)
        lead = qc_appr1b(fig1_params)
        corr = qc_correction_term(fig1_params)
    assert total == lead + corr
    # the correction really is subleading here
    assert abs(corr) < 0.1 * abs(lead)


def test_qc_appr1b_scales_quadratically_in_hot_contact_time():
    # the leading cooling term enters at second order in tau_h
    flat = load_preset("fig1").flat
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        q1 = qc_appr1b(CycleParams.from_flat(dict(flat, tau_h=1e-5)))
        q2 = qc_appr1b(CycleParams.from_flat(dict(flat, tau_h=2e-5)))
    assert q2 == pytest.approx(4.0 * q1, rel=1e-10)


def test_qc_appr1b_order_of_magnitude(fig1_params):
    rep = cycle_report(fig1_params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        est = qc_appr1b(fig1_params)
    assert est > 0
    assert rep.Q_c / est < 10.0


def test_sign_switch_roots_reference_values():
    m = WorkingMediumParams(2.0, 0.1, 6.0)
    b = BathSegmentParams(T=14.0, kappa_down=0.328, tau=1.0)
    roots = sign_switch_roots(m, b, (0.05, 8.0))
    want = [0.2879, 2.4646, 3.8755, 5.5081, 7.0531]
    assert len(roots) == len(want)
    for got, ref in zip(roots, want):
        assert got == pytest.approx(ref, abs=5e-4)
    # each root satisfies the defining crossing
    G = b.relaxation_rate(m.Omega_c)
    for r in roots:
        assert math.exp(-G * r) == pytest.approx(math.cos(m.Omega_c * r), abs=1e-12)


def test_sign_switch_roots_light_damping_pairs():
    # weak coupling: crossings appear in tight pairs around full rotation
    # periods of the coherence plane
    m = WorkingMediumParams(2.0, 0.1, 6.0)
    b = BathSegmentParams(T=14.0, kappa_down=0.005, tau=1.0)
    period = 2.0 * math.pi / m.Omega_c
    roots = sign_switch_roots(m, b, (0.05, 2.5 * period))
    assert len(roots) == 4
    cycles = [r / period for r in roots]
    assert cycles[0] == pytest.approx(1.0, abs=0.05)
    assert cycles[1] == pytest.approx(1.0, abs=0.05)
    assert cycles[2] == pytest.approx(2.0, abs=0.06)
    assert cycles[3] == pytest.approx(2.0, abs=0.06)


def test_sign_switch_roots_empty_range():
    m = WorkingMediumParams(2.0, 0.1, 6.0)
    b = BathSegmentParams(T=14.0, kappa_down=0.328, tau=1.0)
    assert sign_switch_roots(m, b, (0.5, 2.0)) == []


def test_qc_appr2_matches_exact_in_regime():
    for i in range(3):
        params = _sweep_point("fig7", (i,))
        rep = cycle_report(params)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            est = qc_appr2(params)
        assert est == pytest.approx(rep.Q_c, rel=0.3)


def test_qc_appr3a_sign_is_set_by_the_temperature_gap(rng_seed=7):
    rng = np.random.default_rng(rng_seed)
    for _ in range(200):
        J = rng.uniform(0.5, 2.0)
        wc = rng.uniform(3.0, 6.0) * J
        wh = wc * rng.uniform(1.5, 4.0)
        T_c = rng.uniform(1.0, 5.0)
        flat = dict(
            J=J, omega_c=wc, omega_h=wh, T_c=T_c, T_h=T_c * rng.uniform(1.0, 1.3),
            kappa_down_c=0.05, kappa_down_h=0.05,
            tau_c=rng.uniform(0.01, 0.5), tau_h=rng.uniform(0.01, 0.5),
            tau_ch=0.001, tau_hc=0.001,
        )
        params = CycleParams.from_flat(flat)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            est = qc_appr3a(params)
        m = params.medium
        E_c = -m.Omega_c * math.tanh(m.Omega_c / (2.0 * params.cold.T))
        E_h = -m.Omega_h * math.tanh(m.Omega_h / (2.0 * params.hot.T))
        # cooling iff the medium arrives colder than the cold equilibrium
        want_positive = E_c - m.Omega_c * E_h / m.Omega_h > 0
        assert (est > 0) == want_positive


def test_qc_appr3a_rejects_strong_contact():
    flat = dict(
        J=1.0, omega_c=4.0, omega_h=8.0, T_c=2.0, T_h=2.2,
        kappa_down_c=2.0, kappa_down_h=2.0, tau_c=1.0, tau_h=1.0,
        tau_ch=0.001, tau_hc=0.001,
    )
    with pytest.raises(RegimeViolation):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            qc_appr3a(CycleParams.from_flat(flat))


def test_qc_appr3b_order_of_magnitude_and_ramp_sensitivity():
    cfg = load_preset("fig6")
    spec = cfg.sweep_spec()
    base = CycleParams.from_flat(spec.resolve((1,)))  # unit scaling
    rep = cycle_report(base)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        est = qc_appr3b(base)
        fast = qc_appr3b(CycleParams.from_flat(spec.resolve((5,))))
        short_ramp = qc_appr3a(base)
    assert est > 0 and rep.Q_c > 0
    assert abs(est / rep.Q_c) < 10.0
    # unlike the short-ramp form, the estimate depends on the ramp time
    assert est != pytest.approx(fast, rel=1e-3)
    assert est != pytest.approx(short_ramp, rel=1e-3)


def test_work_first_order_is_positive_and_close(fig1_params):
    rep = cycle_report(fig1_params)
    w1 = work_first_order(fig1_params)
    assert w1 > 0
    assert w1 == pytest.approx(rep.W_on, rel=0.25)


def test_work_appr_refines_leading_order(fig1_params):
    rep = cycle_report(fig1_params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        w2 = work_appr(fig1_params)
    assert w2 == pytest.approx(rep.W_on, rel=0.25)


def test_cop_appr_positive_and_bounded(fig1_params):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        cop = cop_appr(fig1_params)
    m = fig1_params.medium
    assert 0 < cop < m.Omega_c / (m.Omega_h - m.Omega_c)


def test_su_appr_positive_and_dominated_by_hot_term(fig1_params):
    rep = cycle_report(fig1_params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        su = su_appr(fig1_params)
    assert su > 0
    hot_term = work_first_order(fig1_params) / fig1_params.hot.T
    assert su == pytest.approx(hot_term, rel=0.2)
    assert su == pytest.approx(rep.entropy_production, rel=0.25)


# ---------------------------------------------------------------------------
# cooling-power maximum over inverse cold temperature


def test_max_cooling_point_closed_form_value():
    # 2 J kappa tau = 2 gives x* = ln(2) / 4
    assert max_cooling_point(1.0, 1.0, 1.0) == pytest.approx(
        math.log(2.0) / 4.0, rel=1e-14
    )


def test_max_cooling_point_requires_strong_cold_contact():
    with pytest.raises(NoMaximum):
        max_cooling_point(1.0, 0.5, 1.0)
    with pytest.raises(NoMaximum):
        max_cooling_point(2.0, 0.328, 0.25 / 0.328)  # exactly at threshold


def test_max_cooling_residual_vanishes_at_the_maximum():
    for J, kd, tau in ((2.0, 0.328, 0.9), (1.0, 1.0, 1.0), (3.0, 0.7, 2.5)):
        x = max_cooling_point(J, kd, tau)
        assert abs(max_cooling_residual(J, kd, tau, x)) < 1e-10
        # and is genuinely nonzero away from it
        assert abs(max_cooling_residual(J, kd, tau, 2.0 * x)) > 1e-6
