"""Figure recipes: which datasets a figure kind needs and how to read them.

A dataset is a CSV file with an optional ``# key = value`` preamble, as
emitted by the sudden-otto command line tool.  Recipes are validated
before any rendering happens, so a missing column fails with a message
naming the dataset and the column.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path


class MissingColumnError(ValueError):
    """A dataset lacks a column the figure kind requires."""


#: figure kind -> required columns, one tuple per dataset slot
KINDS: dict[str, tuple[tuple[str, ...], ...]] = {
    "cycle-diagram": (
        ("Omega", "S_E", "S_vn", "segment"),
        ("Omega", "S_E_cold", "S_E_hot"),
    ),
    "trajectory-3d": (("E", "L", "C", "segment"),),
    "coherence-family": (("tau_adi", "Omega", "coherence"),),
    "island-map": (("status",),),  # plus the two leading axis columns
    "cooling-curve": (("x_J_over_Tc", "ln_P_c", "status"),),
    "cop-power": (("inv_P_c", "inv_cop", "status"),),
}


@dataclass(frozen=True)
class Dataset:
    """Parsed CSV: preamble metadata, column order and row dicts."""

    path: Path
    meta: dict[str, str]
    columns: tuple[str, ...]
    rows: tuple[dict[str, str], ...]

    def floats(self, column: str) -> list[float | None]:
        """Column as floats; empty cells become None."""
        return [float(r[column]) if r[column] != "" else None for r in self.rows]


def read_dataset(path: str | Path) -> Dataset:
    p = Path(path)
    meta: dict[str, str] = {}
    lines = p.read_text().splitlines()
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("#"):
            body_start = i
            break
        text = line.lstrip("#").strip()
        if " = " in text:
            key, value = text.split(" = ", 1)
            meta[key.strip()] = value.strip()
    reader = csv.reader(lines[body_start:])
    header = next(reader, None)
    if not header:
        raise ValueError(f"{p}: no header row")
    rows = tuple(dict(zip(header, row)) for row in reader if row)
    return Dataset(p, meta, tuple(header), rows)


@dataclass(frozen=True)
class FigureRecipe:
    """One figure: kind, input datasets, output path and styling."""

    kind: str
    datasets: tuple[Path, ...]
    out: Path
    dpi: int = 150
    figsize: tuple[float, float] = (6.4, 4.8)
    title: str = ""
    style: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(
                f"unknown figure kind {self.kind!r}; "
                f"expected one of {', '.join(sorted(KINDS))}"
            )
        slots = KINDS[self.kind]
        if len(self.datasets) != len(slots):
            raise ValueError(
                f"{self.kind} needs {len(slots)} dataset(s), "
                f"got {len(self.datasets)}"
            )

    def load(self) -> list[Dataset]:
        """Read and validate every dataset slot."""
        out = []
        for path, required in zip(self.datasets, KINDS[self.kind]):
            ds = read_dataset(path)
            for col in required:
                if col not in ds.columns:
                    raise MissingColumnError(
                        f"dataset {ds.path} is missing column {col!r} "
                        f"required by figure kind {self.kind!r}"
                    )
            if self.kind == "island-map" and len(ds.columns) < 3:
                raise MissingColumnError(
                    f"dataset {ds.path} needs two axis columns before "
                    f"'status' for figure kind 'island-map'"
                )
            out.append(ds)
        return out
