"""Tests for the figure-rendering package.

The only coupling to the physics package is through its public surface:
the ``sudden-otto`` command line tool (invoked as a subprocess) and the
CSV datasets it writes (the shipped reference copies under data/golden).
"""

import subprocess
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

from otto_figures.cli import main
from otto_figures.recipe import FigureRecipe, MissingColumnError, read_dataset
from otto_figures.render import render

GOLDEN = Path(__file__).resolve().parents[2] / "data" / "golden"

RENDER_CASES = [
    ("cycle-diagram", ("fig2_trajectory.csv", "fig2_isotherms.csv")),
    ("trajectory-3d", ("fig4_trajectory.csv",)),
    ("coherence-family", ("fig3_coherence.csv",)),
    ("island-map", ("fig8_island.csv",)),
    ("cooling-curve", ("fig9_cooling.csv",)),
    ("cop-power", ("fig10a_cop_power.csv",)),
]


def _recipe(kind, names, out, source=GOLDEN):
    return FigureRecipe(
        kind=kind, datasets=tuple(source / n for n in names), out=out
    )


# ---------------------------------------------------------------------------
# dataset parsing and validation


def test_read_dataset_preamble_and_rows():
    ds = read_dataset(GOLDEN / "fig9_cooling.csv")
    assert "result.max_x" in ds.meta
    assert ds.columns[0] == "x_J_over_Tc"
    assert len(ds.rows) == 120
    xs = ds.floats("x_J_over_Tc")
    assert xs[0] == pytest.approx(0.05)


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown figure kind"):
        FigureRecipe(kind="pie-chart", datasets=(), out=tmp_path / "x")


def test_dataset_slot_count_enforced(tmp_path):
    with pytest.raises(ValueError, match="needs 2 dataset"):
        _recipe("cycle-diagram", ("fig2_trajectory.csv",), tmp_path / "x")


def test_missing_column_names_dataset_and_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    recipe = FigureRecipe(
        kind="cooling-curve", datasets=(bad,), out=tmp_path / "fig"
    )
    with pytest.raises(MissingColumnError) as err:
        recipe.load()
    assert "bad.csv" in str(err.value)
    assert "x_J_over_Tc" in str(err.value)


# ---------------------------------------------------------------------------
# rendering


@pytest.mark.parametrize("kind,names", RENDER_CASES, ids=[c[0] for c in RENDER_CASES])
def test_kind_renders_png_and_svg(kind, names, tmp_path):
    written = render(_recipe(kind, names, tmp_path / "fig"))
    assert [p.suffix for p in written] == [".png", ".svg"]
    for p in written:
        assert p.exists() and p.stat().st_size > 1000


@pytest.mark.parametrize("kind,names", RENDER_CASES, ids=[c[0] for c in RENDER_CASES])
def test_rerender_is_pixel_identical(kind, names, tmp_path):
    first = render(_recipe(kind, names, tmp_path / "one" / "fig"))
    second = render(_recipe(kind, names, tmp_path / "two" / "fig"))
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()


def test_empty_region_renders_no_data_annotation(tmp_path):
    empty = tmp_path / "empty_cooling.csv"
    empty.write_text(
        "x_J_over_Tc,T_c,T_h,P_c,ln_P_c,status\n"
        "0.5,4.0,4.3,,,non-refrigerating\n"
    )
    written = render(
        FigureRecipe(kind="cooling-curve", datasets=(empty,), out=tmp_path / "fig")
    )
    svg = written[1].read_text()
    assert "no data" in svg


# ---------------------------------------------------------------------------
# command line


def test_cli_lists_kinds():
    res = CliRunner().invoke(main, ["kinds"])
    assert res.exit_code == 0
    for kind, _ in RENDER_CASES:
        assert kind in res.output


def test_cli_render_and_exit_codes(tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, [
        "render", "--kind", "island-map",
        "--dataset", str(GOLDEN / "fig8_island.csv"),
        "--out", str(tmp_path / "map"),
    ])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "map.png").exists()

    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    res = runner.invoke(main, [
        "render", "--kind", "cooling-curve",
        "--dataset", str(bad), "--out", str(tmp_path / "x"),
    ])
    assert res.exit_code == 1
    assert "missing column" in res.output


def test_end_to_end_via_physics_cli(tmp_path):
    """Produce a fresh dataset with the physics command line tool and
    render the cycle diagram from it."""
    subprocess.run(
        [sys.executable, "-m", "sudden_otto.cli", "trajectory",
         "--preset", "fig2", "--out", str(tmp_path)],
        check=True, capture_output=True,
    )
    written = render(_recipe(
        "cycle-diagram",
        ("fig2_trajectory.csv", "fig2_isotherms.csv"),
        tmp_path / "diagram",
        source=tmp_path,
    ))
    assert all(p.exists() for p in written)
    # the freshly produced dataset matches the shipped reference copy
    assert (tmp_path / "fig2_trajectory.csv").read_bytes() == \
        (GOLDEN / "fig2_trajectory.csv").read_bytes()
