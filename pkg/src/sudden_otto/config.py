"""Run configuration: flat sectioned key-value files and named presets.

All quantities are in hbar = k_B = 1 units.  Numeric values are parsed as
arithmetic expressions (so ``14/15`` and ``6.252/0.5157905`` are exact in
the file), evaluated with a small math namespace.

Schema (sections and keys):

    [medium]     J, omega_c, omega_h
    [cold-bath]  T, kappa_down, tau, gamma (optional, default 0)
    [hot-bath]   T, kappa_down, tau, gamma (optional, default 0)
    [adiabats]   tau_ch, tau_hc, schedule (optional: constant-mu | linear)
    [sweep]      kind = grid | island | cooling-curve | cop-power | coherence
                 axis1 / axis2 = name : linspace|geomspace : a : b : n
                                 or name : list : v1, v2, ...
                 constraint1..N = target = expression
                 CT (cooling-curve), product (cop-power),
                 tau_values (coherence)
    [approx]     regime = case-1 | case-2 | case-3a | case-3b
    [output]     name = basename for emitted files
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .model import CycleParams
from .sweeps import Axis, SweepSpec, _eval_expr

PRESET_PACKAGE = "sudden_otto.presets"

_REQUIRED = {
    "medium": ("J", "omega_c", "omega_h"),
    "cold-bath": ("T", "kappa_down", "tau"),
    "hot-bath": ("T", "kappa_down", "tau"),
    "adiabats": ("tau_ch", "tau_hc"),
}


def _num(section: str, key: str, raw: str) -> float:
    try:
        return _eval_expr(raw, {})
    except Exception as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: not a number ({exc})")


def _parse_axis(raw: str) -> Axis:
    parts = [p.strip() for p in raw.split(":")]
    if len(parts) >= 2 and parts[1] == "list":
        vals = [_num("sweep", "axis", v) for v in ":".join(parts[2:]).split(",")]
        return Axis(parts[0], tuple(vals))
    if len(parts) == 5 and parts[1] in ("linspace", "geomspace"):
        a = _num("sweep", "axis", parts[2])
        b = _num("sweep", "axis", parts[3])
        n = int(parts[4])
        fn = np.linspace if parts[1] == "linspace" else np.geomspace
        return Axis(parts[0], tuple(float(v) for v in fn(a, b, n)))
    raise ConfigError(f"malformed axis spec {raw!r}")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration."""

    flat: dict                      # physical parameters, flat keys
    sweep: dict = field(default_factory=dict)
    approx: dict = field(default_factory=dict)
    name: str = "run"

    def cycle_params(self) -> CycleParams:
        try:
            return CycleParams.from_flat(self.flat)
        except (ValueError, KeyError) as exc:
            raise ConfigError(str(exc))

    def sweep_spec(self) -> SweepSpec:
        if "axis1" not in self.sweep:
            raise ConfigError("[sweep] section with axis1 required for this command")
        axes = [self.sweep["axis1"]]
        if "axis2" in self.sweep:
            axes.append(self.sweep["axis2"])
        return SweepSpec(
            base=dict(self.flat),
            axes=tuple(axes),
            constraints=tuple(self.sweep.get("constraints", ())),
        )

    def describe(self) -> list[str]:
        """Sorted ``key = value`` lines of the resolved configuration, for
        self-describing dataset headers."""
        lines = [f"{k} = {self.flat[k]!r}" for k in sorted(self.flat)]
        for k in sorted(self.sweep):
            v = self.sweep[k]
            if isinstance(v, Axis):
                vals = ", ".join(repr(x) for x in v.values)
                lines.append(f"sweep.{k} = {v.name}: {vals}")
            elif k == "constraints":
                for t, e in v:
                    lines.append(f"sweep.constraint: {t} = {e}")
            else:
                lines.append(f"sweep.{k} = {v!r}")
        for k in sorted(self.approx):
            lines.append(f"approx.{k} = {self.approx[k]!r}")
        return lines


def _load_ini(text: str, origin: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=origin)
    except configparser.Error as exc:
        raise ConfigError(f"{origin}: {exc}")

    for section, keys in _REQUIRED.items():
        if not cp.has_section(section):
            raise ConfigError(f"{origin}: missing [{section}] section")
        for key in keys:
            if key not in cp[section]:
                raise ConfigError(f"{origin}: missing {key} in [{section}]")

    flat = {
        "J": _num("medium", "J", cp["medium"]["J"]),
        "omega_c": _num("medium", "omega_c", cp["medium"]["omega_c"]),
        "omega_h": _num("medium", "omega_h", cp["medium"]["omega_h"]),
        "T_c": _num("cold-bath", "T", cp["cold-bath"]["T"]),
        "kappa_down_c": _num("cold-bath", "kappa_down", cp["cold-bath"]["kappa_down"]),
        "tau_c": _num("cold-bath", "tau", cp["cold-bath"]["tau"]),
        "gamma_c": _num("cold-bath", "gamma", cp["cold-bath"].get("gamma", "0")),
        "T_h": _num("hot-bath", "T", cp["hot-bath"]["T"]),
        "kappa_down_h": _num("hot-bath", "kappa_down", cp["hot-bath"]["kappa_down"]),
        "tau_h": _num("hot-bath", "tau", cp["hot-bath"]["tau"]),
        "gamma_h": _num("hot-bath", "gamma", cp["hot-bath"].get("gamma", "0")),
        "tau_ch": _num("adiabats", "tau_ch", cp["adiabats"]["tau_ch"]),
        "tau_hc": _num("adiabats", "tau_hc", cp["adiabats"]["tau_hc"]),
        "schedule": cp["adiabats"].get("schedule", "constant-mu"),
    }

    sweep: dict = {}
    if cp.has_section("sweep"):
        sec = cp["sweep"]
        sweep["kind"] = sec.get("kind", "grid")
        if "axis1" in sec:
            sweep["axis1"] = _parse_axis(sec["axis1"])
        if "axis2" in sec:
            sweep["axis2"] = _parse_axis(sec["axis2"])
        constraints = []
        for key in sorted(k for k in sec if k.startswith("constraint")):
            rule = sec[key]
            if "=" not in rule:
                raise ConfigError(f"{origin}: constraint {rule!r} needs target = expr")
            target, expr = rule.split("=", 1)
            constraints.append((target.strip(), expr.strip()))
        if constraints:
            sweep["constraints"] = tuple(constraints)
        if "ct" in sec:
            sweep["CT"] = _num("sweep", "CT", sec["ct"])
        if "product" in sec:
            sweep["product"] = _num("sweep", "product", sec["product"])
        if "tau_values" in sec:
            sweep["tau_values"] = tuple(
                _num("sweep", "tau_values", v) for v in sec["tau_values"].split(",")
            )

    approx: dict = {}
    if cp.has_section("approx"):
        approx = dict(cp["approx"])

    name = "run"
    if cp.has_section("output") and "name" in cp["output"]:
        name = cp["output"]["name"]

    return RunConfig(flat=flat, sweep=sweep, approx=approx, name=name)


def load_config(path: str | Path) -> RunConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    return _load_ini(p.read_text(), str(p))


def available_presets() -> list[str]:
    names = []
    for entry in resources.files(PRESET_PACKAGE).iterdir():
        if entry.name.endswith(".cfg"):
            names.append(entry.name[:-4])
    return sorted(names)


def load_preset(name: str) -> RunConfig:
    ref = resources.files(PRESET_PACKAGE) / f"{name}.cfg"
    if not ref.is_file():
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(available_presets())}"
        )
    cfg = _load_ini(ref.read_text(), f"preset:{name}")
    if cfg.name == "run":
        cfg = RunConfig(cfg.flat, cfg.sweep, cfg.approx, name)
    return cfg
