"""Back-of-envelope feasibility numbers for flux-line and wire experiments.

Everything here is SI.  Two presets ship: the classic biprism/air-coil
electron-interference geometry (40 keV electrons passing a 36 um coil)
and the neutron/charged-wire setting.  Published write-ups of these
experiments quote results without all inputs, so some preset inputs are
inferred and marked as such; where a quoted number cannot be reproduced
from its stated formula, the report flags the entry as discrepant instead
of fudging the inputs (the quoted thermal speed is one decade above its
own formula, and the quoted in-coil kick displacement is not derivable
from any force choice here).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .units import (
    C_LIGHT_SI,
    ELECTRON_MASS_SI,
    ELECTRON_REST_ENERGY_EV,
    ELEMENTARY_CHARGE_SI,
    K_BOLTZMANN_SI,
    MU0_SI,
)

__all__ = [
    "SolenoidExperiment", "EstimateEntry", "EstimateReport",
    "electron_speed", "interaction_time", "drift_velocity",
    "thermal_velocity", "thermal_displacement",
    "lorentz_force_on_coil_electron", "coil_electron_magnetic_field",
    "centripetal_force", "neutron_circulation_period", "constraint_verdict",
    "mollenstedt_bayh_preset", "neutron_preset",
    "solenoid_experiment_report", "neutron_report",
]


@dataclass
class SolenoidExperiment:
    """Inputs for the electron-past-a-coil estimate chain (SI)."""

    electron_energy_ev: float = 40e3
    loop_diameter: float = 36e-6
    interaction_length: float = 3 * 36e-6
    wire_diameter: float = 5e-6
    current: float = 8e-6          # inferred; see module docstring
    carrier_density: float = 6.3e28
    temperature: float = 300.0

    def __post_init__(self):
        for name in ("electron_energy_ev", "loop_diameter",
                     "interaction_length", "wire_diameter", "current",
                     "carrier_density", "temperature"):
            if not (getattr(self, name) >= 0.0):
                raise ValueError(f"{name} must be nonnegative")

    @property
    def wire_area(self) -> float:
        return math.pi * (self.wire_diameter / 2.0) ** 2

    @property
    def passing_distance(self) -> float:
        return self.loop_diameter / 2.0


@dataclass
class EstimateEntry:
    name: str
    value: float
    unit: str
    reference: float | None = None      # published value, where one exists
    provenance: str = "computed"
    flag: str | None = None             # "discrepant" / "unreproduced"

    @property
    def log10_ratio(self) -> float | None:
        if self.reference in (None, 0.0) or self.value == 0.0:
            return None
        return math.log10(abs(self.value / self.reference))


@dataclass
class EstimateReport:
    title: str
    entries: list[EstimateEntry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, *args, **kwargs):
        self.entries.append(EstimateEntry(*args, **kwargs))

    def entry(self, name: str) -> EstimateEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "entries": [{
                "name": e.name, "value": e.value, "unit": e.unit,
                "reference": e.reference, "provenance": e.provenance,
                "flag": e.flag, "log10_ratio": e.log10_ratio,
            } for e in self.entries],
            "notes": list(self.notes),
        }

    def to_table(self) -> str:
        header = f"{'quantity':<28}{'value':>14}  {'unit':<10}" \
                 f"{'reference':>12}  flag"
        lines = [self.title, "-" * len(header), header, "-" * len(header)]
        for e in self.entries:
            ref = f"{e.reference:.3g}" if e.reference is not None else "-"
            lines.append(f"{e.name:<28}{e.value:>14.4g}  {e.unit:<10}"
                         f"{ref:>12}  {e.flag or ''}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


def electron_speed(energy_ev: float) -> float:
    """Exact relativistic speed of an electron of given kinetic energy."""
    gamma = 1.0 + energy_ev / ELECTRON_REST_ENERGY_EV
    return C_LIGHT_SI * math.sqrt(1.0 - 1.0 / gamma**2)


def interaction_time(exp: SolenoidExperiment) -> float:
    return exp.interaction_length / electron_speed(exp.electron_energy_ev)


def drift_velocity(current: float, carrier_density: float, area: float) -> float:
    """Conduction-electron drift speed I / (n A q)."""
    return current / (carrier_density * area * ELEMENTARY_CHARGE_SI)


def thermal_velocity(temperature: float) -> float:
    """sqrt(2 k_B T / m_e)."""
    return math.sqrt(2.0 * K_BOLTZMANN_SI * temperature / ELECTRON_MASS_SI)


def thermal_displacement(temperature: float, duration: float) -> float:
    return thermal_velocity(temperature) * duration


def coil_electron_magnetic_field(exp: SolenoidExperiment,
                                 passing_distance: float | None = None) -> float:
    """Field of the passing electron at the coil, mu0 q v / (4 pi r^2)."""
    r0 = exp.passing_distance if passing_distance is None else passing_distance
    v_e = electron_speed(exp.electron_energy_ev)
    return MU0_SI * ELEMENTARY_CHARGE_SI * v_e / (4.0 * math.pi * r0**2)


def lorentz_force_on_coil_electron(exp: SolenoidExperiment,
                                   carrier_speed: float | None = None) -> float:
    """q v_carrier B_passing; by default the carrier moves at the drift speed."""
    if carrier_speed is None:
        carrier_speed = drift_velocity(exp.current, exp.carrier_density,
                                       exp.wire_area)
    return ELEMENTARY_CHARGE_SI * carrier_speed * coil_electron_magnetic_field(exp)


def centripetal_force(mass: float, speed: float, radius: float) -> float:
    return mass * speed**2 / radius


def neutron_circulation_period(moment: float, radius: float) -> float:
    """Period of an elementary charge circulating on a loop of the given
    radius that realizes the given moment: T = q pi r^2 / mu."""
    return ELEMENTARY_CHARGE_SI * math.pi * radius**2 / moment


def constraint_verdict(displacement: float, confinement: float,
                       margin: float = 10.0) -> tuple[str, float]:
    """Compare a carrier excursion to its confinement scale.

    Returns ("constrained-plausible" | "unconstrained-plausible" |
    "ambiguous", ratio).  Excursions well above the confinement argue the
    carriers are constrained; well below, the unconstrained description is
    at least tenable.
    """
    if confinement <= 0.0:
        return "ambiguous", math.inf
    ratio = displacement / confinement
    if ratio >= margin:
        return "constrained-plausible", ratio
    if ratio <= 1.0 / margin:
        return "unconstrained-plausible", ratio
    return "ambiguous", ratio


def mollenstedt_bayh_preset() -> SolenoidExperiment:
    return SolenoidExperiment()


def neutron_preset() -> dict:
    return {"moment": 1e-26, "radius": 1e-15, "interaction_time": 1e-5}


def solenoid_experiment_report(exp: SolenoidExperiment | None = None) -> EstimateReport:
    """Full estimate chain for the electron-past-a-coil geometry."""
    if exp is None:
        exp = mollenstedt_bayh_preset()
    rep = EstimateReport(title="electron passing a microcoil (SI)")
    t_int = interaction_time(exp)
    v_d = drift_velocity(exp.current, exp.carrier_density, exp.wire_area)
    v_th = thermal_velocity(exp.temperature)
    dx_th = thermal_displacement(exp.temperature, t_int)
    b_pass = coil_electron_magnetic_field(exp)
    f_lorentz = lorentz_force_on_coil_electron(exp)
    f_cent = centripetal_force(ELECTRON_MASS_SI, v_d, exp.passing_distance)
    dx_kick = 0.5 * (f_lorentz / ELECTRON_MASS_SI) * t_int**2

    rep.add("electron_speed", electron_speed(exp.electron_energy_ev), "m/s")
    rep.add("interaction_time", t_int, "s", reference=1e-12)
    rep.add("drift_velocity", v_d, "m/s", reference=8e-5,
            provenance="computed (current inferred)")
    rep.add("thermal_velocity", v_th, "m/s", reference=9.5e5,
            flag="discrepant",
            provenance="computed; quoted value is 10x its own formula")
    rep.add("thermal_displacement", dx_th, "m", reference=87e-9)
    rep.add("passing_electron_field", b_pass, "T")
    rep.add("coil_electron_lorentz_force", f_lorentz, "N", reference=1e-32)
    rep.add("centripetal_force", f_cent, "N", reference=1e-34)
    rep.add("kick_displacement", dx_kick, "m", reference=3.7e-20,
            flag="unreproduced",
            provenance="computed as (F/2m) t^2 with the drift-speed force; "
                       "no force choice reproduces the quoted value")
    verdict, ratio = constraint_verdict(dx_th, exp.wire_diameter)
    rep.notes.append(
        f"thermal excursion / wire diameter = {ratio:.2e} -> {verdict}")
    rep.notes.append(
        "current inferred so the drift, force, and centripetal targets are "
        "jointly reproduced at order level; 16 uA reproduces the quoted "
        "80 um/s drift exactly but pushes the force entry to 7e-32 N")
    return rep


def neutron_report(params: dict | None = None) -> EstimateReport:
    """Estimate chain for the neutron/charged-wire setting."""
    if params is None:
        params = neutron_preset()
    rep = EstimateReport(title="neutron as a circulating charge loop (SI)")
    period = neutron_circulation_period(params["moment"], params["radius"])
    rep.add("circulation_period", period, "s", reference=1e-23)
    rep.add("interaction_time", params["interaction_time"], "s")
    # a constituent circulates 'ratio' times during one passage: the
    # excursion scale is the circumference times that count
    ratio = params["interaction_time"] / period
    rep.add("circulations_per_passage", ratio, "", reference=2e17)
    verdict, _ = constraint_verdict(
        ratio * 2 * math.pi * params["radius"], params["radius"])
    rep.notes.append(f"constituents circulate {ratio:.2e} times per passage "
                     f"-> {verdict}")
    return rep
