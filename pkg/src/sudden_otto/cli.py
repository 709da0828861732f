"""Command line front end.

Subcommands: limit-cycle, trajectory, sweep, island-map, approx-compare,
validate.  Each reads a config file (--config) or a named preset
(--preset) and writes self-describing CSV/JSON datasets into --out
(default: $SUDDEN_OTTO_OUT or the current directory).

Exit codes:
    0  success (refrigerating cycle where applicable)
    1  configuration error
    3  cycle evaluated but not refrigerating
    4  marginal cycle (no unique limit cycle)
    5  no convergence
    6  validation against the dense integrator failed
"""

from __future__ import annotations

import math
import os
import sys
import warnings
from pathlib import Path

import click
import numpy as np

from .approx import (
    RegimeWarning,
    cop_appr,
    qc_appr1,
    qc_appr1b,
    qc_appr2,
    qc_appr3a,
    qc_appr3b,
    sign_switch_roots,
    su_appr,
    work_appr,
    work_first_order,
)
from .config import RunConfig, load_config, load_preset
from .datasets import format_value, write_csv, write_json
from .errors import (
    ConfigError,
    MarginalCycle,
    NoConvergence,
    RegimeViolation,
    SuddenOttoError,
)
from .limit_cycle import cycle_report, trajectory
from .lindblad import (
    energy_eigenbasis,
    evolve_isochore,
    evolve_ramp,
    observables_from_rho,
)
from .model import (
    CycleParams,
    equilibrium_entropy,
    reconstruct_density_matrix,
)
from .propagators import build_segments
from .sweeps import (
    coherence_vs_adiabat_time,
    cop_vs_power,
    island_map,
    pc_vs_temperature,
    run_sweep,
)

ENV_OUTDIR = "SUDDEN_OTTO_OUT"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_REFRIGERATING = 3
EXIT_MARGINAL = 4
EXIT_NO_CONVERGENCE = 5
EXIT_VALIDATION = 6


def _common(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="Path to a run configuration file.")(fn)
    fn = click.option("--preset", default=None,
                      help="Named built-in preset (fig1..fig10b).")(fn)
    fn = click.option("--out", "out_dir", type=click.Path(), default=None,
                      help=f"Output directory (default: ${ENV_OUTDIR} or cwd).")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                      default="csv", help="Machine-readable output format.")(fn)
    fn = click.option("--threads", type=int, default=1,
                      help="Worker threads for sweeps.")(fn)
    fn = click.option("--seed", type=int, default=None,
                      help="Reserved; all computation is deterministic.")(fn)
    return fn


def _resolve(config_path, preset) -> RunConfig:
    if (config_path is None) == (preset is None):
        raise ConfigError("exactly one of --config or --preset is required")
    if config_path is not None:
        return load_config(config_path)
    return load_preset(preset)


def _outdir(out_dir) -> Path:
    d = Path(out_dir or os.environ.get(ENV_OUTDIR, "."))
    d.mkdir(parents=True, exist_ok=True)
    return d


def _fail(exc: Exception) -> "sys.NoReturn":
    click.echo(f"error: {exc}", err=True)
    if isinstance(exc, ConfigError):
        sys.exit(EXIT_CONFIG)
    if isinstance(exc, MarginalCycle):
        sys.exit(EXIT_MARGINAL)
    if isinstance(exc, NoConvergence):
        sys.exit(EXIT_NO_CONVERGENCE)
    sys.exit(EXIT_CONFIG)


@click.group()
def main() -> None:
    """Sudden-cycle quantum Otto refrigerator toolkit (hbar = k_B = 1)."""


@main.command("limit-cycle")
@_common
def cmd_limit_cycle(config_path, preset, out_dir, fmt, threads, seed):
    """Solve the limit cycle and report per-cycle thermodynamics."""
    try:
        cfg = _resolve(config_path, preset)
        params = cfg.cycle_params()
        report = cycle_report(params)
    except (SuddenOttoError, ConfigError) as exc:
        _fail(exc)

    out = _outdir(out_dir)
    record = {
        "Q_c": report.Q_c,
        "Q_h": report.Q_h,
        "W_on": report.W_on,
        "P_c": report.P_c,
        "cop": report.cop,
        "entropy_production": report.entropy_production,
        "refrigerating": report.refrigerating,
        "status": report.status,
        "spectral_gap": report.spectral_gap,
        "closure_residual": report.closure_residual,
        "cop_otto_bound": report.cop_otto_bound,
        "cop_carnot_bound": report.cop_carnot_bound,
        "tau_cycle": params.tau_cycle,
        "corners": {
            k: {"E": v.E, "L": v.L, "C": v.C, "D": v.D}
            for k, v in report.corners.items()
        },
        "config": dict(sorted(cfg.flat.items())),
    }
    if fmt == "json":
        write_json(out / f"{cfg.name}_report.json", record)
    else:
        keys = [k for k in record if k not in ("corners", "config")]
        write_csv(
            out / f"{cfg.name}_report.csv",
            cfg.describe(),
            keys,
            [[record[k] for k in keys]],
        )

    text = [f"cycle report: {cfg.name}", ""]
    for k in ("status", "Q_c", "Q_h", "W_on", "P_c", "cop",
              "entropy_production", "spectral_gap", "closure_residual",
              "cop_otto_bound", "cop_carnot_bound", "tau_cycle"):
        text.append(f"  {k:22s} {format_value(record[k])}")
    text.append("")
    for corner in "ABCD":
        v = report.corners[corner]
        text.append(
            f"  corner {corner}:  E={v.E:+.6e}  L={v.L:+.6e}  "
            f"C={v.C:+.6e}  D={v.D:+.6e}"
        )
    (out / f"{cfg.name}_report.txt").write_text("\n".join(text) + "\n")
    click.echo(f"{report.status}: P_c = {report.P_c!r}")
    sys.exit(EXIT_OK if report.refrigerating else EXIT_NOT_REFRIGERATING)


@main.command("trajectory")
@_common
@click.option("--samples", type=int, default=200,
              help="Samples per segment along the cycle.")
def cmd_trajectory(config_path, preset, out_dir, fmt, threads, seed, samples):
    """Sample the limit cycle in time and emit trajectory and isotherm
    datasets."""
    try:
        cfg = _resolve(config_path, preset)
        params = cfg.cycle_params()
        rows = trajectory(params, samples)
    except (SuddenOttoError, ConfigError) as exc:
        _fail(exc)

    out = _outdir(out_dir)
    header = ["t", "segment", "omega", "Omega", "E", "L", "C", "D",
              "S_E", "S_vn", "coherence"]
    write_csv(
        out / f"{cfg.name}_trajectory.csv",
        cfg.describe() + [f"samples_per_segment = {samples}"],
        header,
        [
            [r.t, r.segment, r.omega, r.Omega, r.E, r.L, r.C, r.D,
             r.S_E, r.S_vn, r.coherence]
            for r in rows
        ],
    )

    m = params.medium
    grid = np.linspace(m.Omega_c, m.Omega_h, 200)
    write_csv(
        out / f"{cfg.name}_isotherms.csv",
        cfg.describe(),
        ["Omega", "S_E_cold", "S_E_hot"],
        [
            [float(Om),
             equilibrium_entropy(float(Om), params.cold.T),
             equilibrium_entropy(float(Om), params.hot.T)]
            for Om in grid
        ],
    )
    click.echo(f"wrote {len(rows)} trajectory points")
    sys.exit(EXIT_OK)


def _sweep_grid_rows(cfg, spec, result):
    axis_names = [ax.name for ax in spec.axes]
    header = axis_names + [
        "status", "Q_c", "Q_h", "W_on", "P_c", "cop",
        "entropy_production", "spectral_gap", "failure",
    ]
    rows = []
    for rec in result.records:
        coords = [spec.axes[k].values[i] for k, i in enumerate(rec.index)]
        r = rec.report
        rows.append(coords + [
            rec.status,
            r.Q_c if r else None,
            r.Q_h if r else None,
            r.W_on if r else None,
            r.P_c if r else None,
            r.cop if r else None,
            r.entropy_production if r else None,
            r.spectral_gap if r else None,
            rec.failure,
        ])
    return header, rows


@main.command("sweep")
@_common
def cmd_sweep(config_path, preset, out_dir, fmt, threads, seed):
    """Run the configured parameter sweep (grid, cooling-curve, cop-power
    or coherence family)."""
    try:
        cfg = _resolve(config_path, preset)
        kind = cfg.sweep.get("kind", "grid")
        out = _outdir(out_dir)
        if kind == "grid":
            spec = cfg.sweep_spec()
            result = run_sweep(spec, threads)
            header, rows = _sweep_grid_rows(cfg, spec, result)
            write_csv(out / f"{cfg.name}_sweep.csv", cfg.describe(), header, rows)
            click.echo(f"wrote {len(rows)} sweep points")
        elif kind == "cooling-curve":
            spec = cfg.sweep_spec()
            curve = pc_vs_temperature(
                cfg.flat, spec.axes[0].values, cfg.sweep["CT"], threads
            )
            pre = cfg.describe() + [
                f"result.max_x = {format_value(curve.max_x)}",
                f"result.cutoff_x = {format_value(curve.cutoff_x)}",
            ]
            write_csv(
                out / f"{cfg.name}_cooling.csv",
                pre,
                ["x_J_over_Tc", "T_c", "T_h", "P_c", "ln_P_c", "status"],
                [[p.x, p.T_c, p.T_h, p.P_c, p.ln_P_c, p.status]
                 for p in curve.points],
            )
            click.echo(f"max at x = {format_value(curve.max_x)}")
        elif kind == "cop-power":
            spec = cfg.sweep_spec()
            curve = cop_vs_power(
                cfg.flat, spec.axes[0].values, cfg.sweep["product"], threads
            )
            pre = cfg.describe() + [
                f"result.monotone_segments = {curve.monotone_segments}"
            ]
            write_csv(
                out / f"{cfg.name}_cop_power.csv",
                pre,
                ["omega_h", "tau_h", "inv_P_c", "inv_cop", "status"],
                [[p.omega_h, p.tau_h, p.inv_P_c, p.inv_cop, p.status]
                 for p in curve.points],
            )
            click.echo(f"{len(curve.points)} points")
        elif kind == "coherence":
            traces = coherence_vs_adiabat_time(cfg.flat, cfg.sweep["tau_values"])
            rows = []
            for tr in traces:
                for Om, c in zip(tr.Omegas, tr.coherences):
                    rows.append([tr.tau_adi, Om, c])
            write_csv(
                out / f"{cfg.name}_coherence.csv",
                cfg.describe(),
                ["tau_adi", "Omega", "coherence"],
                rows,
            )
            click.echo(f"{len(traces)} traces")
        else:
            raise ConfigError(f"unknown sweep kind {kind!r}")
    except (SuddenOttoError, ConfigError, KeyError) as exc:
        _fail(exc)
    sys.exit(EXIT_OK)


@main.command("island-map")
@_common
def cmd_island_map(config_path, preset, out_dir, fmt, threads, seed):
    """Map refrigeration over a 2-axis time-allocation grid."""
    try:
        cfg = _resolve(config_path, preset)
        spec = cfg.sweep_spec()
        imap = island_map(spec, threads)
    except (SuddenOttoError, ConfigError, ValueError) as exc:
        _fail(exc)

    out = _outdir(out_dir)
    ax0, ax1 = spec.axes
    pre = cfg.describe() + [
        f"result.island_count = {imap.island_count}",
        f"result.refrigerating_fraction = {imap.refrigerating_fraction!r}",
        f"result.row_sign_changes_total = {sum(imap.row_sign_changes)}",
        f"result.col_sign_changes_total = {sum(imap.col_sign_changes)}",
    ]
    rows = []
    for rec in imap.result.records:
        i, j = rec.index
        rows.append([
            ax0.values[i], ax1.values[j], rec.status,
            rec.report.Q_c if rec.report else None,
            rec.report.W_on if rec.report else None,
        ])
    write_csv(
        out / f"{cfg.name}_island.csv",
        pre,
        [ax0.name, ax1.name, "status", "Q_c", "W_on"],
        rows,
    )
    click.echo(f"islands: {imap.island_count}")
    sys.exit(EXIT_OK)


def _approx_values(regime: str, params: CycleParams) -> dict:
    out: dict = {}
    if regime == "case-1":
        out["qc_appr1"] = qc_appr1(params)
        out["qc_appr1b"] = qc_appr1b(params)
        out["work_appr"] = work_appr(params)
        out["work_first_order"] = work_first_order(params)
        out["cop_appr"] = cop_appr(params)
        out["su_appr"] = su_appr(params)
    elif regime == "case-2":
        out["qc_appr2"] = qc_appr2(params)
    elif regime == "case-3a":
        try:
            out["qc_appr3a"] = qc_appr3a(params)
        except RegimeViolation:
            out["qc_appr3a"] = None
    elif regime == "case-3b":
        out["qc_appr3b"] = qc_appr3b(params)
    else:
        raise ConfigError(f"unknown approx regime {regime!r}")
    return out


@main.command("approx-compare")
@_common
def cmd_approx_compare(config_path, preset, out_dir, fmt, threads, seed):
    """Pair closed-form approximations with exact limit-cycle values over
    the configured sweep."""
    try:
        cfg = _resolve(config_path, preset)
        regime = cfg.approx.get("regime")
        if regime is None:
            raise ConfigError("[approx] regime required for approx-compare")
        spec = cfg.sweep_spec()
        result = run_sweep(spec, threads)
    except (SuddenOttoError, ConfigError) as exc:
        _fail(exc)

    out = _outdir(out_dir)
    axis_names = [ax.name for ax in spec.axes]
    approx_cols: list[str] = []
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        for rec in result.records:
            coords = [spec.axes[k].values[i] for k, i in enumerate(rec.index)]
            try:
                params = CycleParams.from_flat(rec.params)
                vals = _approx_values(regime, params)
            except (SuddenOttoError, ValueError) as exc:
                vals = {}
            if not approx_cols and vals:
                approx_cols = list(vals)
            r = rec.report
            rows.append(
                coords
                + [vals.get(c) for c in approx_cols]
                + [r.Q_c if r else None, r.W_on if r else None,
                   r.cop if r else None, r.entropy_production if r else None,
                   rec.status]
            )
    header = axis_names + approx_cols + [
        "Q_c_exact", "W_on_exact", "cop_exact", "su_exact", "status",
    ]
    pre = cfg.describe() + [f"regime = {regime}"]
    write_csv(out / f"{cfg.name}_approx.csv", pre, header, rows)

    if regime == "case-1" and len(spec.axes) == 1 and axis_names[0] == "tau_c":
        params = cfg.cycle_params()
        lo, hi = spec.axes[0].values[0], spec.axes[0].values[-1]
        roots = sign_switch_roots(params.medium, params.cold, (lo, hi))
        write_csv(
            out / f"{cfg.name}_roots.csv",
            pre,
            ["root_tau_c"],
            [[r] for r in roots],
        )
        click.echo(f"{len(rows)} points, {len(roots)} predicted sign switches")
    else:
        click.echo(f"{len(rows)} points")
    sys.exit(EXIT_OK)


@main.command("validate")
@_common
def cmd_validate(config_path, preset, out_dir, fmt, threads, seed):
    """Cross-check each segment propagator against the dense integrator at
    the configured operating point."""
    try:
        cfg = _resolve(config_path, preset)
        params = cfg.cycle_params()
        segments = build_segments(params)
        from .limit_cycle import corner_states, fixed_point
        from .propagators import global_propagator

        x_A = fixed_point(global_propagator(segments))
        corners = corner_states(x_A, segments)
    except (SuddenOttoError, ConfigError) as exc:
        _fail(exc)

    m = params.medium
    plan = [
        ("cold-contact", corners["A"], m.omega_c, m.omega_c),
        ("compression", corners["B"], m.omega_c, m.omega_h),
        ("hot-contact", corners["C"], m.omega_h, m.omega_h),
        ("expansion", corners["D"], m.omega_h, m.omega_c),
    ]
    rows = []
    worst = 0.0
    for seg, (name, x_in, w_in, w_out) in zip(segments, plan):
        # reconstruct in the energy basis, then rotate to the product basis
        # the integrator works in
        V = energy_eigenbasis(w_in, m.J)
        rho0 = reconstruct_density_matrix(x_in, math.hypot(w_in, m.J))
        rho0 = V @ rho0 @ V.conj().T
        if name == "cold-contact":
            rho1 = evolve_isochore(rho0, w_in, m.J, params.cold)
        elif name == "hot-contact":
            rho1 = evolve_isochore(rho0, w_in, m.J, params.hot)
        else:
            sched = (params.ramp_up if name == "compression"
                     else params.ramp_down).schedule
            rho1 = evolve_ramp(rho0, m.J, w_in, w_out, seg.tau, sched)
        oracle = observables_from_rho(rho1, w_out, m.J)
        exact = seg.apply(x_in)
        for comp in ("E", "L", "C", "D"):
            a, b = getattr(exact, comp), getattr(oracle, comp)
            err = abs(a - b)
            worst = max(worst, err)
            rows.append([name, comp, a, b, err])

    out = _outdir(out_dir)
    ok = worst < 1e-6
    pre = cfg.describe() + [
        f"result.max_abs_error = {worst!r}",
        f"result.pass = {'true' if ok else 'false'}",
    ]
    write_csv(out / f"{cfg.name}_validation.csv", pre,
              ["segment", "observable", "closed_form", "integrator", "abs_error"],
              rows)
    click.echo(f"max |closed form - integrator| = {worst:.3e}")
    sys.exit(EXIT_OK if ok else EXIT_VALIDATION)


if __name__ == "__main__":
    main()
