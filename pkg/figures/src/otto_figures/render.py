"""Deterministic matplotlib rendering for the six figure kinds.

Every renderer draws only numbers read from dataset columns (and summary
values from the dataset preamble); nothing is recomputed here.  Output is
a PNG and an SVG with fixed styling and no timestamps, so re-rendering
the same dataset gives byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipe import Dataset, FigureRecipe

# stable ids inside the SVG output
matplotlib.rcParams["svg.hashsalt"] = "otto-figures"

SEGMENT_COLORS = {
    "cold-contact": "#1f77b4",
    "compression": "#2ca02c",
    "hot-contact": "#d62728",
    "expansion": "#ff7f0e",
}

_NO_DATA_KW = dict(ha="center", va="center", fontsize=14, color="0.4")


def _annotate_no_data(ax) -> None:
    ax.text(0.5, 0.5, "no data", transform=ax.transAxes, **_NO_DATA_KW)


def _segment_runs(rows):
    """Consecutive runs of equal 'segment' values as (name, start, stop)."""
    runs = []
    start = 0
    for i in range(1, len(rows) + 1):
        if i == len(rows) or rows[i]["segment"] != rows[start]["segment"]:
            runs.append((rows[start]["segment"], start, i))
            start = i
    return runs


def _cycle_diagram(ax, traj: Dataset, iso: Dataset) -> None:
    Om = iso.floats("Omega")
    ax.plot(Om, iso.floats("S_E_cold"), ls="--", lw=1.0, color="#1f77b4",
            label="cold isotherm")
    ax.plot(Om, iso.floats("S_E_hot"), ls="--", lw=1.0, color="#d62728",
            label="hot isotherm")
    if not traj.rows:
        _annotate_no_data(ax)
        return
    tOm = traj.floats("Omega")
    ax.plot(tOm, traj.floats("S_E"), lw=1.6, color="#2ca02c",
            label="population entropy")
    ax.plot(tOm, traj.floats("S_vn"), lw=1.6, color="#9467bd",
            label="state entropy")
    ax.set_xlabel("energy gap")
    ax.set_ylabel("entropy")
    ax.legend(loc="best", fontsize=8)


def _trajectory_3d(ax, traj: Dataset) -> None:
    if not traj.rows:
        _annotate_no_data(ax)
        return
    E = traj.floats("E")
    L = traj.floats("L")
    C = traj.floats("C")
    rows = list(traj.rows)
    seen = set()
    for name, a, b in _segment_runs(rows):
        stop = min(b + 1, len(rows))  # join consecutive segments
        ax.plot(E[a:stop], L[a:stop], C[a:stop],
                color=SEGMENT_COLORS.get(name, "0.3"), lw=1.2,
                label=None if name in seen else name)
        seen.add(name)
    ax.set_xlabel("energy")
    ax.set_ylabel("stretching")
    ax.set_zlabel("rotated stretching")
    ax.legend(loc="upper left", fontsize=7)


def _coherence_family(ax, ds: Dataset) -> None:
    if not ds.rows:
        _annotate_no_data(ax)
        return
    taus = ds.floats("tau_adi")
    Om = ds.floats("Omega")
    coh = ds.floats("coherence")
    order = sorted(set(taus))
    cmap = plt.get_cmap("viridis")
    for k, tau in enumerate(order):
        xs = [o for t, o in zip(taus, Om) if t == tau]
        ys = [c for t, c in zip(taus, coh) if t == tau]
        color = cmap(0.1 + 0.8 * k / max(len(order) - 1, 1))
        ax.plot(xs, ys, lw=1.2, color=color, label=f"ramp time {tau:g}")
    ax.set_xlabel("energy gap")
    ax.set_ylabel("coherence")
    ax.legend(loc="best", fontsize=8)


def _island_map(ax, ds: Dataset) -> None:
    if not ds.rows:
        _annotate_no_data(ax)
        return
    xcol, ycol = ds.columns[0], ds.columns[1]
    xs = ds.floats(xcol)
    ys = ds.floats(ycol)
    xv = sorted(set(xs))
    yv = sorted(set(ys))
    xi = {v: i for i, v in enumerate(xv)}
    yi = {v: i for i, v in enumerate(yv)}
    grid = np.full((len(yv), len(xv)), np.nan)
    for x, y, row in zip(xs, ys, ds.rows):
        grid[yi[y], xi[x]] = 1.0 if row["status"] == "refrigerating" else 0.0

    def edges(vals):
        v = np.asarray(vals, dtype=float)
        if len(v) == 1:
            return np.array([v[0] - 0.5, v[0] + 0.5])
        mid = (v[1:] + v[:-1]) / 2.0
        return np.concatenate(([2 * v[0] - mid[0]], mid, [2 * v[-1] - mid[-1]]))

    cmap = matplotlib.colors.ListedColormap(["#f2f2f2", "#1f77b4"])
    ax.pcolormesh(edges(xv), edges(yv), grid, cmap=cmap, vmin=0.0, vmax=1.0)
    ax.set_xlabel(xcol)
    ax.set_ylabel(ycol)


def _cooling_curve(ax, ds: Dataset) -> None:
    xs, ys = [], []
    for row in ds.rows:
        if row["status"] == "refrigerating" and row["ln_P_c"] != "":
            xs.append(float(row["x_J_over_Tc"]))
            ys.append(float(row["ln_P_c"]))
    if not xs:
        _annotate_no_data(ax)
        return
    ax.plot(xs, ys, lw=1.4, color="#1f77b4", marker=".", ms=3)
    max_x = ds.meta.get("result.max_x", "")
    if max_x not in ("", "None"):
        ax.axvline(float(max_x), ls=":", color="#2ca02c", lw=1.0,
                   label="maximum")
    cutoff = ds.meta.get("result.cutoff_x", "")
    if cutoff not in ("", "None"):
        ax.axvline(float(cutoff), ls=":", color="#d62728", lw=1.0,
                   label="cooling cutoff")
    ax.set_xlabel("coupling over cold temperature")
    ax.set_ylabel("log cooling power")
    ax.legend(loc="best", fontsize=8)


def _cop_power(ax, ds: Dataset) -> None:
    pts = [
        (float(r["inv_P_c"]), float(r["inv_cop"]))
        for r in ds.rows
        if r["status"] == "refrigerating" and r["inv_P_c"] != ""
    ]
    if not pts:
        _annotate_no_data(ax)
        return
    pts.sort()
    ax.plot([p[0] for p in pts], [p[1] for p in pts],
            lw=1.2, color="#1f77b4", marker="o", ms=3)
    ax.set_xscale("log")
    ax.set_xlabel("inverse cooling power")
    ax.set_ylabel("inverse coefficient of performance")


def render(recipe: FigureRecipe) -> list[Path]:
    """Render a recipe to PNG and SVG; returns the written paths."""
    datasets = recipe.load()
    fig = plt.figure(figsize=recipe.figsize)
    if recipe.kind == "trajectory-3d":
        ax = fig.add_subplot(projection="3d")
    else:
        ax = fig.add_subplot()

    if recipe.kind == "cycle-diagram":
        _cycle_diagram(ax, datasets[0], datasets[1])
    elif recipe.kind == "trajectory-3d":
        _trajectory_3d(ax, datasets[0])
    elif recipe.kind == "coherence-family":
        _coherence_family(ax, datasets[0])
    elif recipe.kind == "island-map":
        _island_map(ax, datasets[0])
    elif recipe.kind == "cooling-curve":
        _cooling_curve(ax, datasets[0])
    else:
        _cop_power(ax, datasets[0])

    if recipe.title:
        ax.set_title(recipe.title)
    fig.tight_layout()

    out = Path(recipe.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    png = out.with_suffix(".png")
    svg = out.with_suffix(".svg")
    fig.savefig(png, dpi=recipe.dpi)
    # a fixed Date keeps the SVG byte-stable across renders
    fig.savefig(svg, metadata={"Date": None})
    plt.close(fig)
    return [png, svg]
