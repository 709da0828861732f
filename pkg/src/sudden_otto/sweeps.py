"""Deterministic batch evaluation over parameter grids.

A sweep is a base parameter set, one or two named axes, and an ordered list
of tied-parameter constraints (expressions re-evaluated at every grid
point).  Grid points are independent; results are keyed by grid index so
serial and concurrent execution produce identical output.  Failures are
data: a point that raises is recorded with its error kind, never aborting
the sweep, because the abrupt refrigerator/non-refrigerator jumps are part
of the phenomenology being mapped.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import SuddenOttoError
from .limit_cycle import CycleReport, cycle_report, trajectory
from .model import CycleParams

#: flat-parameter keys understood by CycleParams.from_flat
PHYSICAL_KEYS = (
    "J", "omega_c", "omega_h", "T_c", "T_h",
    "kappa_down_c", "kappa_down_h", "gamma_c", "gamma_h",
    "tau_c", "tau_h", "tau_ch", "tau_hc", "schedule",
)

_EXPR_NAMES = {
    k: getattr(math, k)
    for k in ("sqrt", "exp", "log", "sin", "cos", "tan", "pi", "tanh", "hypot")
}


def _eval_expr(expr: str, scope: dict) -> float:
    ns = dict(_EXPR_NAMES)
    ns.update(scope)
    return float(eval(expr, {"__builtins__": {}}, ns))  # noqa: S307 - config-owned


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError(f"axis {self.name!r} has no values")


@dataclass(frozen=True)
class SweepSpec:
    """Base parameters, 1-2 axes, and ordered tied-parameter rules.

    Constraint targets may introduce derived parameters; rules are applied
    in order after the axis values are set, so later rules see earlier
    results.
    """

    base: dict
    axes: tuple[Axis, ...]
    constraints: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("sweep needs 1 or 2 axes")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(ax.values) for ax in self.axes)

    def resolve(self, index: tuple[int, ...]) -> dict:
        """Flat parameter dict at one grid point, constraints applied."""
        flat = dict(self.base)
        for ax, i in zip(self.axes, index):
            flat[ax.name] = ax.values[i]
        for target, expr in self.constraints:
            flat[target] = _eval_expr(expr, flat)
        return flat


@dataclass(frozen=True)
class PointRecord:
    index: tuple[int, ...]
    params: dict
    report: CycleReport | None
    failure: str | None

    @property
    def status(self) -> str:
        if self.failure is not None:
            return "failed"
        return self.report.status


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    records: tuple[PointRecord, ...]

    def grid_status(self) -> list[list[str]]:
        """Statuses as a nested list in axis order (2-axis sweeps only)."""
        n0, n1 = self.spec.shape
        out = [[""] * n1 for _ in range(n0)]
        for r in self.records:
            out[r.index[0]][r.index[1]] = r.status
        return out


def _evaluate(spec: SweepSpec, index: tuple[int, ...]) -> PointRecord:
    flat = spec.resolve(index)
    physical = {k: flat[k] for k in PHYSICAL_KEYS if k in flat}
    try:
        params = CycleParams.from_flat(physical)
        report = cycle_report(params)
        return PointRecord(index, physical, report, None)
    except (SuddenOttoError, ValueError) as exc:
        return PointRecord(index, physical, None, type(exc).__name__)


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Evaluate cycle_report on every grid point.

    Deterministic: output depends only on the spec, not on thread count or
    completion order.
    """
    indices = [(i,) for i in range(spec.shape[0])]
    if len(spec.axes) == 2:
        indices = [(i, j) for i in range(spec.shape[0]) for j in range(spec.shape[1])]
    if threads <= 1:
        records = [_evaluate(spec, ix) for ix in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda ix: _evaluate(spec, ix), indices))
    return SweepResult(spec, tuple(records))


# ---------------------------------------------------------------------------
# derived products


@dataclass(frozen=True)
class IslandMap:
    result: SweepResult
    statuses: list[list[str]]
    island_count: int
    row_sign_changes: list[int]
    col_sign_changes: list[int]

    @property
    def refrigerating_fraction(self) -> float:
        flat = [s for row in self.statuses for s in row]
        return sum(s == "refrigerating" for s in flat) / len(flat)


def _count_islands(good: list[list[bool]]) -> int:
    # 4-neighbor flood fill
    n0, n1 = len(good), len(good[0])
    seen = [[False] * n1 for _ in range(n0)]
    count = 0
    for i in range(n0):
        for j in range(n1):
            if good[i][j] and not seen[i][j]:
                count += 1
                stack = [(i, j)]
                seen[i][j] = True
                while stack:
                    a, b = stack.pop()
                    for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        na, nb = a + da, b + db
                        if 0 <= na < n0 and 0 <= nb < n1 and good[na][nb] and not seen[na][nb]:
                            seen[na][nb] = True
                            stack.append((na, nb))
    return count


def island_map(spec: SweepSpec, threads: int = 1) -> IslandMap:
    """Refrigeration map over a 2-axis (time-allocation) grid with island
    and sign-change statistics."""
    if len(spec.axes) != 2:
        raise ValueError("island map needs a 2-axis sweep")
    result = run_sweep(spec, threads)
    statuses = result.grid_status()
    good = [[s == "refrigerating" for s in row] for row in statuses]
    rows = [sum(r[k] != r[k + 1] for k in range(len(r) - 1)) for r in good]
    cols = [
        sum(good[k][j] != good[k + 1][j] for k in range(len(good) - 1))
        for j in range(len(good[0]))
    ]
    return IslandMap(result, statuses, _count_islands(good), rows, cols)


@dataclass(frozen=True)
class CoolingCurvePoint:
    x: float           # J / T_c
    T_c: float
    T_h: float
    P_c: float | None
    ln_P_c: float | None
    status: str


@dataclass(frozen=True)
class CoolingCurve:
    points: tuple[CoolingCurvePoint, ...]
    max_x: float | None       # interior maximum of ln P_c, if any
    cutoff_x: float | None    # last refrigerating point (minimum temperature)


def pc_vs_temperature(
    base: dict, x_values, CT: float, threads: int = 1
) -> CoolingCurve:
    """Cooling power against inverse cold temperature x = J / T_c with the
    hot temperature tied by T_c / T_h = CT."""
    if not 0.0 < CT < 1.0:
        raise ValueError(f"temperature ratio CT must lie in (0,1), got {CT}")
    spec = SweepSpec(
        base=dict(base, CT=CT),
        axes=(Axis("x_J_over_Tc", tuple(float(x) for x in x_values)),),
        constraints=(("T_c", "J / x_J_over_Tc"), ("T_h", "T_c / CT")),
    )
    result = run_sweep(spec, threads)
    points = []
    for rec in result.records:
        x = spec.axes[0].values[rec.index[0]]
        Tc, Th = rec.params["T_c"], rec.params["T_h"]
        if rec.report is not None and rec.report.refrigerating:
            pc = rec.report.P_c
            points.append(
                CoolingCurvePoint(x, Tc, Th, pc, math.log(pc), "refrigerating")
            )
        else:
            points.append(CoolingCurvePoint(x, Tc, Th, None, None, rec.status))
    ln = [p.ln_P_c for p in points]
    max_x = None
    for k in range(1, len(points) - 1):
        if ln[k] is None or ln[k - 1] is None or ln[k + 1] is None:
            continue
        if ln[k] >= ln[k - 1] and ln[k] >= ln[k + 1] and ln[k] == max(
            v for v in ln if v is not None
        ):
            max_x = points[k].x
            break
    refr = [p.x for p in points if p.status == "refrigerating"]
    return CoolingCurve(tuple(points), max_x, max(refr) if refr else None)


@dataclass(frozen=True)
class CopPowerPoint:
    omega_h: float
    tau_h: float
    inv_P_c: float | None
    inv_cop: float | None
    status: str


@dataclass(frozen=True)
class CopPowerCurve:
    points: tuple[CopPowerPoint, ...]
    monotone_segments: int


def cop_vs_power(
    base: dict, omega_h_values, omega_h_tau_h: float, threads: int = 1
) -> CopPowerCurve:
    """Inverse COP against inverse cooling power along the fixed
    omega_h * tau_h subfamily."""
    spec = SweepSpec(
        base=dict(base, wt_product=omega_h_tau_h),
        axes=(Axis("omega_h", tuple(float(w) for w in omega_h_values)),),
        constraints=(("tau_h", "wt_product / omega_h"),),
    )
    result = run_sweep(spec, threads)
    points = []
    for rec in result.records:
        wh = rec.params["omega_h"]
        th = rec.params["tau_h"]
        if rec.report is not None and rec.report.refrigerating:
            points.append(
                CopPowerPoint(wh, th, 1.0 / rec.report.P_c, 1.0 / rec.report.cop,
                              "refrigerating")
            )
        else:
            points.append(CopPowerPoint(wh, th, None, None, rec.status))
    ok = [(p.inv_P_c, p.inv_cop) for p in points if p.status == "refrigerating"]
    ok.sort()
    segments = 0
    prev_dir = 0
    for (x0, y0), (x1, y1) in zip(ok, ok[1:]):
        d = 0 if y1 == y0 else (1 if y1 > y0 else -1)
        if d != 0 and d != prev_dir:
            segments += 1
            prev_dir = d
    return CopPowerCurve(tuple(points), max(segments, 1 if ok else 0))


@dataclass(frozen=True)
class CoherenceTrace:
    tau_adi: float
    Omegas: tuple[float, ...]
    coherences: tuple[float, ...]

    @property
    def max_coherence(self) -> float:
        return max(self.coherences)


def coherence_vs_adiabat_time(
    base: dict, tau_adi_values, samples_per_segment: int = 200
) -> list[CoherenceTrace]:
    """Coherence along the limit cycle for a family of ramp durations; the
    maximum coherence shrinks as the ramps slow down."""
    traces = []
    for tau in tau_adi_values:
        flat = {k: base[k] for k in PHYSICAL_KEYS if k in base}
        flat["tau_ch"] = flat["tau_hc"] = float(tau)
        params = CycleParams.from_flat(flat)
        rows = trajectory(params, samples_per_segment)
        traces.append(
            CoherenceTrace(
                float(tau),
                tuple(r.Omega for r in rows),
                tuple(r.coherence for r in rows),
            )
        )
    return traces
