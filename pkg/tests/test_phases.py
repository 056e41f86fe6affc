"""Phase accumulation: winding quantization, route equivalences, and the
composite force-built phase."""

import numpy as np
import pytest

from darwinics.bodies import LineCharge, LineSolenoid, MagneticDipole
from darwinics.errors import OnAxisError
from darwinics.forces import ac_force_on_loop
from darwinics.phases import (
    PhaseResult,
    PolyPath,
    ab_phase,
    ac_phase,
    composite_force_phase,
    unconstrained_ab_phase,
    winding_number,
)
from darwinics.units import Units

UNITS = Units(c=7.0, hbar=1.0)
RNG = np.random.default_rng(3)


def circle(radius, n=16, turns=1, center=(0.0, 0.0), wobble=0.0):
    theta = np.linspace(0, 2 * np.pi * turns, n * turns, endpoint=False)
    return [(center[0] + radius * np.cos(t),
             center[1] + radius * np.sin(t),
             wobble * np.sin(3 * t)) for t in theta]


class TestWinding:
    def test_unit_circle(self):
        assert winding_number(PolyPath(circle(1.0))) == 1

    def test_reversed(self):
        assert winding_number(PolyPath(circle(1.0)[::-1])) == -1

    def test_double_turn(self):
        assert winding_number(PolyPath(circle(1.0, turns=2))) == 2

    def test_not_enclosing(self):
        assert winding_number(PolyPath(circle(0.5, center=(3, 0)))) == 0


class TestFluxLinePhase:
    def setup_method(self):
        self.s = LineSolenoid(flux=2.6)
        self.q = 1.3
        self.unit_phase = self.q * self.s.flux / (UNITS.hbar * UNITS.c)

    def test_unit_winding(self):
        res = ab_phase(PolyPath(circle(1.5, wobble=0.2)), self.s, self.q, UNITS)
        assert res.phase == pytest.approx(self.unit_phase, rel=1e-12)
        assert res.kinetic_part == 0.0

    def test_double_winding(self):
        res = ab_phase(PolyPath(circle(1.5, turns=2)), self.s, self.q, UNITS)
        assert res.phase == pytest.approx(2 * self.unit_phase, rel=1e-10)

    def test_non_enclosing(self):
        res = ab_phase(PolyPath(circle(0.5, center=(4, 0))), self.s, self.q,
                       UNITS)
        assert abs(res.phase) < 1e-12 * self.unit_phase

    def test_reversal_flips_sign(self):
        path = PolyPath(circle(1.5))
        res = ab_phase(path, self.s, self.q, UNITS)
        res_rev = ab_phase(path.reversed(), self.s, self.q, UNITS)
        assert res_rev.phase == pytest.approx(-res.phase, rel=1e-12)

    def test_deformation_invariance(self):
        # homotopic deformations that keep the axis enclosed
        values = []
        for k, (radius, cx, wobble) in enumerate([
                (1.0, 0.0, 0.0), (2.0, 0.3, 0.1), (1.3, -0.4, 0.3),
                (3.0, 0.8, 0.0), (1.7, 0.2, 0.5)]):
            path = PolyPath(circle(radius, n=24, center=(cx, 0.0),
                                   wobble=wobble))
            values.append(ab_phase(path, self.s, self.q, UNITS).phase)
        assert np.ptp(values) < 1e-9 * abs(np.mean(values))

    def test_concatenation_additivity(self):
        # two loops traversed in sequence = sum of phases
        both = circle(1.5) + circle(2.5)
        res = ab_phase(PolyPath(both), self.s, self.q, UNITS)
        # the connecting jumps form chords that cancel nothing: the combined
        # path winds twice
        assert res.phase == pytest.approx(2 * self.unit_phase, rel=1e-10)

    def test_axis_crossing_raises(self):
        path = PolyPath([(1, 0, 0), (-1, 0, 0), (0, 1, 0)])
        with pytest.raises(OnAxisError):
            ab_phase(path, self.s, self.q, UNITS)

    def test_open_path_rejected(self):
        with pytest.raises(ValueError):
            ab_phase(PolyPath(circle(1.0), closed=False), self.s, self.q, UNITS)


class TestWirePhase:
    def setup_method(self):
        self.w = LineCharge(lam=1.1)
        self.mu = 0.9
        self.unit_phase = 4 * np.pi * self.w.lam * self.mu \
            / (UNITS.hbar * UNITS.c)

    def test_unit_winding(self):
        res = ac_phase(PolyPath(circle(1.2)), self.w, [0, 0, self.mu], UNITS)
        assert res.phase == pytest.approx(self.unit_phase, rel=1e-12)

    def test_in_plane_moment_no_phase(self):
        path = PolyPath([(1.5, 0, 0), (0, 1.5, 0), (-1.5, 0, 0), (0, -1.5, 0)])
        res = ac_phase(path, self.w, [0.7, 0.3, 0.0], UNITS)
        assert abs(res.phase) < 1e-14

    def test_non_enclosing(self):
        res = ac_phase(PolyPath(circle(0.4, center=(3, 1))), self.w,
                       [0, 0, self.mu], UNITS)
        assert abs(res.phase) < 1e-12 * self.unit_phase


class TestUnconstrainedRoute:
    def setup_method(self):
        self.s = LineSolenoid(flux=2.6)
        self.q = 1.3
        self.path = PolyPath(circle(1.5))

    def test_identical_to_direct_phase(self):
        direct = ab_phase(self.path, self.s, self.q, UNITS)
        summed = unconstrained_ab_phase(self.path, self.s, self.q, mass=1.0,
                                        units=UNITS)
        assert summed.phase == pytest.approx(direct.phase, rel=1e-12)

    def test_discretized_slices_converge(self):
        # refine the slice spacing and the z-cutoff together
        direct = ab_phase(self.path, self.s, self.q, UNITS).phase
        devs = []
        for n, z in ((101, 25.0), (801, 100.0), (6401, 400.0)):
            approx = unconstrained_ab_phase(self.path, self.s, self.q, 1.0,
                                            UNITS, n_slices=n, z_cut=z).phase
            devs.append(abs(approx - direct) / abs(direct))
        assert devs[0] > devs[1] > devs[2]
        assert devs[2] < 5e-5

    def test_zero_flux_kinetic_only(self):
        s0 = LineSolenoid(flux=0.0)
        res = unconstrained_ab_phase(self.path, s0, self.q, 1.0, UNITS)
        assert res.vector_part == pytest.approx(0.0, abs=1e-15)
        assert res.phase == res.kinetic_part


class TestCompositeForcePhase:
    def setup_method(self):
        self.w = LineCharge(lam=1.1)
        self.mu = 0.9
        self.report = composite_force_phase(self.w, self.mu, mass=1.0,
                                            speed=0.8, impact_parameter=1.0,
                                            units=UNITS)

    def test_per_arm_magnitude(self):
        expected = 2 * np.pi * self.w.lam * self.mu / (UNITS.hbar * UNITS.c)
        assert abs(self.report["upper"].force_part) == \
            pytest.approx(expected, rel=1e-6)
        assert abs(self.report["lower"].force_part) == \
            pytest.approx(expected, rel=1e-6)
        assert self.report["upper"].force_part == \
            pytest.approx(-self.report["lower"].force_part, rel=1e-9)

    def test_difference_is_wire_phase(self):
        expected = 4 * np.pi * self.w.lam * self.mu / (UNITS.hbar * UNITS.c)
        assert self.report["difference"] == pytest.approx(expected, rel=1e-6)

    def test_difference_matches_enclosing_loop_phase(self):
        # lower arm forward + upper arm backward winds counterclockwise
        loop = PolyPath(circle(1.0))
        loop_phase = ac_phase(loop, self.w, [0, 0, self.mu], UNITS).phase
        assert self.report["difference"] == pytest.approx(loop_phase, rel=1e-6)

    def test_kinetic_parts_cancel_in_difference(self):
        assert self.report["upper"].kinetic_part == \
            self.report["lower"].kinetic_part

    def test_zero_charge_density(self):
        report = composite_force_phase(LineCharge(lam=0.0), self.mu, 1.0, 0.8,
                                       1.0, UNITS)
        assert report["upper"].force_part == 0.0
        assert report["difference"] == 0.0

    def test_inline_force_matches_module_force(self):
        # the vectorized arm force is the same closed form the force module
        # exposes
        for xv in (-2.3, 0.4, 1.9):
            dip = MagneticDipole(mu=[0, 0, self.mu], m=1.0, r=[xv, 1.0, 0.0],
                                 v=[0.8, 0, 0])
            f = ac_force_on_loop(dip, self.w, UNITS)
            zeta = -xv + 1j * (0.0 - 1.0)
            rho2 = zeta.real**2 + zeta.imag**2
            struct = -1j * (-0.8) * zeta * zeta / rho2**2
            f_inline = -(2 * self.w.lam * self.mu / UNITS.c) \
                * np.array([struct.real, struct.imag, 0.0])
            np.testing.assert_allclose(f_inline, f, rtol=1e-13)


class TestDispersionlessness:
    def test_vector_part_speed_independent(self):
        s = LineSolenoid(flux=2.0)
        slow = ab_phase(PolyPath(circle(1.5), speed=1.0), s, 1.0, UNITS)
        fast = ab_phase(PolyPath(circle(1.5), speed=2.0), s, 1.0, UNITS)
        assert slow.vector_part == pytest.approx(fast.vector_part, rel=1e-13)

    def test_force_part_speed_independent_kinetic_not(self):
        w = LineCharge(lam=1.1)
        rep_slow = composite_force_phase(w, 0.9, mass=1.0, speed=0.4,
                                         impact_parameter=1.0, units=UNITS)
        rep_fast = composite_force_phase(w, 0.9, mass=1.0, speed=0.8,
                                         impact_parameter=1.0, units=UNITS)
        assert rep_slow["upper"].force_part == \
            pytest.approx(rep_fast["upper"].force_part, rel=1e-8)
        assert rep_slow["upper"].kinetic_part != rep_fast["upper"].kinetic_part


class TestPhaseResult:
    def test_decomposition_enforced(self):
        with pytest.raises(ValueError):
            PhaseResult(phase=1.0, kinetic_part=0.2, vector_part=0.2,
                        force_part=0.2)
