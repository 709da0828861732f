"""Deterministic tabular output.

Datasets are comma-separated files with a leading ``#`` comment block that
records the fully resolved configuration, making every file self-describing.
Floats are written with ``repr`` (shortest round-trip form) so identical
computations yield identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: str | Path, preamble: list[str], header: list[str], rows) -> None:
    lines = [f"# {line}" for line in preamble]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, indent=2, default=_default) + "\n"
    )


def _default(obj):
    from dataclasses import asdict, is_dataclass

    if is_dataclass(obj):
        return asdict(obj)
    if hasattr(obj, "tolist"):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj)}")
