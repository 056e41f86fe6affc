"""Order-of-magnitude estimate chain in SI."""

import math

import pytest

from darwinics.estimates import (
    EstimateReport,
    SolenoidExperiment,
    centripetal_force,
    constraint_verdict,
    drift_velocity,
    electron_speed,
    interaction_time,
    lorentz_force_on_coil_electron,
    mollenstedt_bayh_preset,
    neutron_circulation_period,
    neutron_preset,
    neutron_report,
    solenoid_experiment_report,
    thermal_displacement,
    thermal_velocity,
)
from darwinics.units import ELECTRON_MASS_SI


def order_ok(value, reference, dex=0.7):
    return abs(math.log10(abs(value / reference))) < dex


class TestSpeedAndTime:
    def test_relativistic_40kev(self):
        # gamma = 1 + 40/511 -> beta = 0.374
        v = electron_speed(40e3)
        assert v == pytest.approx(0.3741 * 2.998e8, rel=1e-3)

    def test_nonrelativistic_sanity(self):
        # 1 eV electron: v = sqrt(2E/m) = 5.93e5 m/s
        v = electron_speed(1.0)
        assert v == pytest.approx(5.93e5, rel=1e-3)

    def test_interaction_time_about_a_picosecond(self):
        t = interaction_time(mollenstedt_bayh_preset())
        assert order_ok(t, 1e-12)
        assert t == pytest.approx(0.963e-12, rel=1e-3)

    def test_time_linear_in_length(self):
        exp = mollenstedt_bayh_preset()
        exp2 = SolenoidExperiment(interaction_length=2 * exp.interaction_length)
        assert interaction_time(exp2) == pytest.approx(2 * interaction_time(exp))


class TestDrift:
    def test_sixteen_microamp_reproduces_quoted_drift(self):
        exp = mollenstedt_bayh_preset()
        v = drift_velocity(16e-6, exp.carrier_density, exp.wire_area)
        assert v == pytest.approx(8.0e-5, rel=2e-2)

    def test_zero_current(self):
        exp = mollenstedt_bayh_preset()
        assert drift_velocity(0.0, exp.carrier_density, exp.wire_area) == 0.0

    def test_halving_area_doubles_drift(self):
        exp = mollenstedt_bayh_preset()
        v1 = drift_velocity(exp.current, exp.carrier_density, exp.wire_area)
        v2 = drift_velocity(exp.current, exp.carrier_density, exp.wire_area / 2)
        assert v2 == pytest.approx(2 * v1)


class TestThermal:
    def test_room_temperature_speed(self):
        # the formula gives 9.5e4 m/s; the often-quoted 9.5e5 is flagged
        assert thermal_velocity(300.0) == pytest.approx(9.54e4, rel=1e-2)

    def test_zero_temperature(self):
        assert thermal_velocity(0.0) == 0.0

    def test_quadrupling_temperature_doubles_speed(self):
        assert thermal_velocity(1200.0) == pytest.approx(
            2 * thermal_velocity(300.0))

    def test_displacement_87_nm(self):
        t = interaction_time(mollenstedt_bayh_preset())
        dx = thermal_displacement(300.0, t)
        assert order_ok(dx, 87e-9)

    def test_displacement_linear_in_time(self):
        assert thermal_displacement(300.0, 2e-12) == pytest.approx(
            2 * thermal_displacement(300.0, 1e-12))


class TestForces:
    def test_lorentz_force_order(self):
        f = lorentz_force_on_coil_electron(mollenstedt_bayh_preset())
        assert order_ok(f, 1e-32)

    def test_zero_carrier_speed(self):
        assert lorentz_force_on_coil_electron(mollenstedt_bayh_preset(),
                                              carrier_speed=0.0) == 0.0

    def test_force_inverse_square_in_distance(self):
        exp = mollenstedt_bayh_preset()
        f1 = lorentz_force_on_coil_electron(exp)
        exp2 = SolenoidExperiment(loop_diameter=2 * exp.loop_diameter)
        f2 = lorentz_force_on_coil_electron(exp2)
        assert f2 == pytest.approx(f1 / 4)

    def test_centripetal_order(self):
        # at the quoted 80 um/s drift the value lands near 3e-34 N
        f = centripetal_force(ELECTRON_MASS_SI, 8e-5, 18e-6)
        assert f == pytest.approx(3.2e-34, rel=0.05)
        assert order_ok(f, 1e-34)

    def test_centripetal_quadratic_in_speed(self):
        assert centripetal_force(1.0, 2.0, 1.0) == \
            pytest.approx(4 * centripetal_force(1.0, 1.0, 1.0))

    def test_zero_speed(self):
        assert centripetal_force(ELECTRON_MASS_SI, 0.0, 1e-6) == 0.0


class TestNeutron:
    def test_period_value(self):
        t = neutron_circulation_period(1e-26, 1e-15)
        assert t == pytest.approx(5.03e-23, rel=1e-3)

    def test_doubling_moment_halves_period(self):
        assert neutron_circulation_period(2e-26, 1e-15) == pytest.approx(
            neutron_circulation_period(1e-26, 1e-15) / 2)

    def test_circulations_per_passage(self):
        p = neutron_preset()
        ratio = p["interaction_time"] / neutron_circulation_period(
            p["moment"], p["radius"])
        assert ratio == pytest.approx(2e17, rel=0.1)
        assert ratio > 1e10


class TestVerdicts:
    def test_unconstrained_plausible_for_coil(self):
        exp = mollenstedt_bayh_preset()
        dx = thermal_displacement(exp.temperature, interaction_time(exp))
        verdict, ratio = constraint_verdict(dx, exp.wire_diameter)
        assert verdict == "unconstrained-plausible"
        assert ratio < 0.1

    def test_constrained_for_neutron(self):
        p = neutron_preset()
        turns = p["interaction_time"] / neutron_circulation_period(
            p["moment"], p["radius"])
        excursion = turns * 2 * math.pi * p["radius"]
        verdict, _ = constraint_verdict(excursion, p["radius"])
        assert verdict == "constrained-plausible"

    def test_degenerate_confinement(self):
        verdict, ratio = constraint_verdict(1e-9, 0.0)
        assert verdict == "ambiguous"
        assert math.isinf(ratio)


class TestReports:
    def test_solenoid_report_orders(self):
        rep = solenoid_experiment_report()
        for name in ("interaction_time", "drift_velocity",
                     "thermal_displacement", "coil_electron_lorentz_force",
                     "centripetal_force"):
            entry = rep.entry(name)
            assert entry.flag is None
            assert abs(entry.log10_ratio) < 0.7, name

    def test_flagged_entries_not_matched(self):
        rep = solenoid_experiment_report()
        assert rep.entry("thermal_velocity").flag == "discrepant"
        assert abs(rep.entry("thermal_velocity").log10_ratio) > 0.7
        assert rep.entry("kick_displacement").flag == "unreproduced"

    def test_neutron_report(self):
        rep = neutron_report()
        assert rep.entry("circulation_period").value == \
            pytest.approx(5.03e-23, rel=1e-3)
        assert any("constrained-plausible" in n for n in rep.notes)

    def test_serialization(self):
        rep = solenoid_experiment_report()
        d = rep.to_dict()
        assert {e["name"] for e in d["entries"]} >= {
            "interaction_time", "drift_velocity", "thermal_velocity"}
        table = rep.to_table()
        assert "interaction_time" in table
        assert "discrepant" in table

    def test_custom_temperature_scales(self):
        hot = solenoid_experiment_report(SolenoidExperiment(temperature=1200.0))
        cold = solenoid_experiment_report(SolenoidExperiment(temperature=300.0))
        assert hot.entry("thermal_velocity").value == pytest.approx(
            2 * cold.entry("thermal_velocity").value)


class TestEstimateReportContainer:
    def test_missing_entry_raises(self):
        rep = EstimateReport(title="x")
        with pytest.raises(KeyError):
            rep.entry("nope")


class Dim:
    """Minimal SI dimension vector (m, kg, s, A, K) for auditing the
    estimate formulas: mixing incompatible dimensions is an error."""

    def __init__(self, m=0, kg=0, s=0, A=0, K=0):
        self.vec = (m, kg, s, A, K)

    def __mul__(self, other):
        return Dim(*(a + b for a, b in zip(self.vec, other.vec)))

    def __truediv__(self, other):
        return Dim(*(a - b for a, b in zip(self.vec, other.vec)))

    def __pow__(self, n):
        return Dim(*(a * n for a in self.vec))

    def __add__(self, other):
        if self.vec != other.vec:
            raise TypeError(f"dimension mismatch: {self.vec} + {other.vec}")
        return self

    def sqrt(self):
        if any(a % 2 for a in self.vec):
            raise TypeError("odd dimension under sqrt")
        return Dim(*(a // 2 for a in self.vec))

    def __eq__(self, other):
        return self.vec == other.vec


METER = Dim(m=1)
KG = Dim(kg=1)
SECOND = Dim(s=1)
AMP = Dim(A=1)
KELVIN = Dim(K=1)
SCALAR = Dim()
COULOMB = AMP * SECOND
JOULE = KG * METER**2 / SECOND**2
NEWTON = KG * METER / SECOND**2
TESLA = KG / (SECOND**2 * AMP)


class TestDimensionalAudit:
    """Recompute each estimate formula with dimension propagation; an
    inconsistent composition raises, and each result must match the unit
    its report entry declares."""

    def test_all_formulas_compose(self):
        speed = METER / SECOND
        t_int = METER / speed
        assert t_int == SECOND
        v_drift = AMP / ((METER**-3) * METER**2 * COULOMB)
        assert v_drift == speed
        k_B = JOULE / KELVIN
        v_th = ((k_B * KELVIN / KG) + (k_B * KELVIN / KG)).sqrt()
        assert v_th == speed
        assert v_th * t_int == METER
        mu0 = NEWTON / AMP**2
        b_pass = mu0 * COULOMB * speed / METER**2
        assert b_pass == TESLA
        f_lorentz = COULOMB * speed * b_pass
        assert f_lorentz == NEWTON
        f_cent = KG * speed**2 / METER
        assert f_cent == NEWTON
        moment = JOULE / TESLA
        period = COULOMB * METER**2 / moment
        assert period == SECOND

    def test_inconsistent_composition_raises(self):
        with pytest.raises(TypeError):
            METER + SECOND
        with pytest.raises(TypeError):
            (METER / SECOND).sqrt()
