"""Declarative scenario files.

A scenario is a JSON object naming one of the four systems, the
description mode, body parameters, integrator controls, and requested
outputs.  Parameters may be given in SI; they are converted to the
Gaussian core at ingestion.  A run manifest embeds the resolved scenario,
so manifests re-ingest as scenarios and reproduce their runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import units as u
from .bodies import LineCharge, LineSolenoid, MagneticDipole, PointCharge
from .engine import DynamicalSystem, darwin_system, flux_line_system, \
    mott_schwinger_system, wire_moment_system
from .errors import ScenarioError
from .units import Units

__all__ = ["Scenario", "load_scenario", "build_system"]

SYSTEMS = ("feynman", "mott-schwinger", "ab", "ac")
MODES = {
    "feynman": ("darwin",),
    "mott-schwinger": ("constrained", "unconstrained"),
    "ab": ("constrained", "unconstrained"),
    "ac": ("constrained", "unconstrained", "hamiltonian", "hidden-momentum"),
}
PROVIDER_OF_MODE = {
    "darwin": "darwin",
    "constrained": "constrained-lagrangian",
    "unconstrained": "unconstrained-force",
    "hamiltonian": "hamiltonian",
    "hidden-momentum": "hidden-momentum",
}
BODY_ROSTER = {
    "feynman": ("body1", "body2"),
    "mott-schwinger": ("charge", "dipole"),
    "ab": ("charge", "solenoid"),
    "ac": ("dipole", "wire"),
}


@dataclass
class Scenario:
    system: str
    mode: str
    units: Units
    bodies: dict
    integrator: dict = field(default_factory=dict)
    scattering: dict = field(default_factory=dict)
    outputs: tuple[str, ...] = ("trajectory",)
    sweep: dict | None = None
    seed: int = 0
    effective_length: float = 1.0
    density_convention: str = "legacy"
    raw: dict = field(default_factory=dict)


def _require(mapping, key, where, kind=None):
    if key not in mapping:
        raise ScenarioError("missing required field", field=f"{where}.{key}")
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise ScenarioError(f"expected {kind}, got {type(value).__name__}",
                            field=f"{where}.{key}")
    return value


def _vec(raw, where, n=3):
    try:
        vec = [float(x) for x in raw]
    except (TypeError, ValueError):
        raise ScenarioError("expected a numeric sequence", field=where)
    if len(vec) != n:
        raise ScenarioError(f"expected {n} components, got {len(vec)}",
                            field=where)
    return np.array(vec)


class _SiConverter:
    """Field-role-aware SI -> Gaussian conversion (identity for gaussian)."""

    def __init__(self, system_tag: str):
        if system_tag not in ("gaussian", "si"):
            raise ScenarioError("units.system must be 'gaussian' or 'si'",
                                field="units.system")
        self.si = system_tag == "si"

    def length(self, x):
        return u.length_si_to_gaussian(x) if self.si else x

    def velocity(self, x):
        return u.velocity_si_to_gaussian(x) if self.si else x

    def charge(self, x):
        return u.charge_si_to_gaussian(x) if self.si else x

    def mass(self, x):
        return u.mass_si_to_gaussian(x) if self.si else x

    def flux(self, x):
        return u.magnetic_flux_si_to_gaussian(x) if self.si else x

    def lam(self, x):
        return u.linear_charge_density_si_to_gaussian(x) if self.si else x

    def moment(self, x):
        return u.magnetic_moment_si_to_gaussian(x) if self.si else x

    def mass_per_length(self, x):
        return u.mass_si_to_gaussian(x) / 100.0 if self.si else x


def _parse_units(raw: dict) -> tuple[Units, _SiConverter]:
    block = raw.get("units", {"system": "gaussian"})
    conv = _SiConverter(block.get("system", "gaussian"))
    if conv.si:
        c = block.get("c", u.C_LIGHT_CGS)
        hbar = block.get("hbar", u.HBAR_CGS)
    else:
        c = block.get("c", 1.0)
        hbar = block.get("hbar", 1.0)
    if not (isinstance(c, (int, float)) and c > 0):
        raise ScenarioError("c must be a positive number", field="units.c")
    if not (isinstance(hbar, (int, float)) and hbar > 0):
        raise ScenarioError("hbar must be a positive number",
                            field="units.hbar")
    return Units(c=float(c), hbar=float(hbar)), conv


def _parse_point_charge(raw, where, conv):
    return PointCharge(
        q=conv.charge(float(_require(raw, "q", where))),
        m=conv.mass(float(_require(raw, "m", where))),
        r=conv.length(_vec(_require(raw, "r", where), f"{where}.r")),
        v=conv.velocity(_vec(_require(raw, "v", where), f"{where}.v")))


def _parse_dipole(raw, where, conv):
    return MagneticDipole(
        mu=conv.moment(_vec(_require(raw, "mu", where), f"{where}.mu")),
        m=conv.mass(float(_require(raw, "m", where))),
        r=conv.length(_vec(_require(raw, "r", where), f"{where}.r")),
        v=conv.velocity(_vec(_require(raw, "v", where), f"{where}.v")))


def _parse_line(raw, where, conv, cls, amount_key, amount_conv):
    axis = _vec(raw.get("axis_point", (0.0, 0.0)), f"{where}.axis_point", n=2)
    v2 = _vec(raw.get("v", (0.0, 0.0)), f"{where}.v", n=2)
    return cls(**{
        amount_key: amount_conv(float(_require(raw, amount_key, where))),
        "axis_point": tuple(conv.length(axis)),
        "mass_per_length": conv.mass_per_length(
            float(raw.get("mass_per_length", 1.0))),
        "v": conv.velocity(np.array([v2[0], v2[1], 0.0])),
    })


def load_scenario(source) -> Scenario:
    """Parse and validate a scenario from a path, JSON text, or dict.

    Run manifests (objects with a ``scenario`` key) re-ingest as the
    embedded scenario.
    """
    if isinstance(source, (str, Path)) and Path(source).exists():
        try:
            raw = json.loads(Path(source).read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON: {exc}") from exc
    elif isinstance(source, str):
        try:
            raw = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON: {exc}") from exc
    elif isinstance(source, dict):
        raw = source
    else:
        raise ScenarioError(f"cannot load a scenario from {type(source)!r}")

    if "scenario" in raw and "system" not in raw:
        raw = raw["scenario"]   # a manifest round-trips

    system = _require(raw, "system", "scenario", str)
    if system not in SYSTEMS:
        raise ScenarioError(f"unknown system {system!r}; expected one of "
                            f"{SYSTEMS}", field="system")
    mode = raw.get("mode", "darwin" if system == "feynman" else None)
    if mode is None:
        raise ScenarioError("missing required field", field="mode")
    if mode not in MODES[system]:
        raise ScenarioError(
            f"mode {mode!r} is not valid for system {system!r}; allowed: "
            f"{MODES[system]}", field="mode")

    units, conv = _parse_units(raw)
    bodies_raw = _require(raw, "bodies", "scenario", dict)
    bodies = {}
    for name in BODY_ROSTER[system]:
        body_raw = _require(bodies_raw, name, "bodies", dict)
        where = f"bodies.{name}"
        if name in ("body1", "body2", "charge"):
            bodies[name] = _parse_point_charge(body_raw, where, conv)
        elif name == "dipole":
            bodies[name] = _parse_dipole(body_raw, where, conv)
        elif name == "solenoid":
            bodies[name] = _parse_line(body_raw, where, conv, LineSolenoid,
                                       "flux", conv.flux)
        elif name == "wire":
            bodies[name] = _parse_line(body_raw, where, conv, LineCharge,
                                       "lam", conv.lam)

    integrator = dict(raw.get("integrator", {}))
    integrator.setdefault("t0", 0.0)
    integrator.setdefault("t1", 1.0)
    integrator.setdefault("tol", 1e-10)
    integrator.setdefault("samples", 200)
    if not integrator["t1"] > integrator["t0"]:
        raise ScenarioError("t1 must exceed t0", field="integrator.t1")
    if not integrator["tol"] > 0:
        raise ScenarioError("tol must be positive", field="integrator.tol")

    scattering = dict(raw.get("scattering", {}))
    if scattering:
        s_mode = scattering.setdefault("mode", "impulse-approx")
        if s_mode not in ("impulse-approx", "full"):
            raise ScenarioError("scattering.mode must be 'impulse-approx' "
                                "or 'full'", field="scattering.mode")
        scattering.setdefault("window_factor", 200.0)

    outputs = tuple(raw.get("outputs",
                            ("scattering",) if scattering else ("trajectory",)))
    for out in outputs:
        if out not in ("trajectory", "scattering"):
            raise ScenarioError(f"unknown output {out!r}", field="outputs")
    if "scattering" in outputs and not scattering:
        scattering = {"mode": "impulse-approx", "window_factor": 200.0}

    sweep = raw.get("sweep")
    if sweep is not None:
        values = _require(sweep, "values", "sweep", list)
        if len(values) == 0:
            raise ScenarioError("sweep.values must be nonempty",
                                field="sweep.values")
        sweep.setdefault("parameter", "impact_parameter")
        sweep.setdefault("modes", [mode])
        for m in sweep["modes"]:
            if m not in MODES[system]:
                raise ScenarioError(f"sweep mode {m!r} invalid for {system!r}",
                                    field="sweep.modes")

    return Scenario(
        system=system, mode=mode, units=units, bodies=bodies,
        integrator=integrator, scattering=scattering, outputs=outputs,
        sweep=sweep, seed=int(raw.get("seed", 0)),
        effective_length=float(raw.get("effective_length", 1.0)),
        density_convention=raw.get("density_convention", "legacy"),
        raw=raw)


def build_system(scn: Scenario, mode: str | None = None) -> DynamicalSystem:
    """Materialize the dynamical system a scenario describes."""
    mode = mode or scn.mode
    provider = PROVIDER_OF_MODE[mode]
    if scn.system == "feynman":
        return darwin_system(scn.bodies["body1"], scn.bodies["body2"],
                             scn.units)
    if scn.system == "mott-schwinger":
        return mott_schwinger_system(scn.bodies["charge"],
                                     scn.bodies["dipole"], scn.units, provider)
    if scn.system == "ab":
        return flux_line_system(scn.bodies["charge"], scn.bodies["solenoid"],
                                scn.units, provider,
                                effective_length=scn.effective_length,
                                density_convention=scn.density_convention)
    if scn.system == "ac":
        return wire_moment_system(scn.bodies["dipole"], scn.bodies["wire"],
                                  scn.units, provider,
                                  effective_length=scn.effective_length)
    raise ScenarioError(f"unhandled system {scn.system!r}", field="system")
