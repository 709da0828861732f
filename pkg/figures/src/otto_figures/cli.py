"""Command line entry point: render one figure from CSV datasets."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .recipe import KINDS, FigureRecipe, MissingColumnError
from .render import render


@click.group()
def main() -> None:
    """Render figures from sudden-otto CSV datasets."""


@main.command("kinds")
def cmd_kinds() -> None:
    """List the supported figure kinds and their dataset slots."""
    for kind, slots in sorted(KINDS.items()):
        cols = "; ".join(", ".join(slot) for slot in slots)
        click.echo(f"{kind}: {len(slots)} dataset(s) [{cols}]")


@main.command("render")
@click.option("--kind", required=True, type=click.Choice(sorted(KINDS)),
              help="Figure kind.")
@click.option("--dataset", "datasets", multiple=True, required=True,
              type=click.Path(), help="Input CSV (repeat for multi-slot kinds).")
@click.option("--out", required=True, type=click.Path(),
              help="Output path; .png and .svg are written next to it.")
@click.option("--dpi", type=int, default=150, show_default=True)
@click.option("--title", default="", help="Optional figure title.")
def cmd_render(kind, datasets, out, dpi, title) -> None:
    """Render one figure; emits PNG and SVG."""
    try:
        recipe = FigureRecipe(
            kind=kind,
            datasets=tuple(Path(d) for d in datasets),
            out=Path(out),
            dpi=dpi,
            title=title,
        )
        written = render(recipe)
    except (MissingColumnError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    for path in written:
        click.echo(str(path))


if __name__ == "__main__":
    main()
