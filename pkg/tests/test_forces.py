"""Unconstrained force fields against their Lorentz-force oracles, plus the
straight-path impulse/displacement integrals."""

import numpy as np
import pytest

from darwinics.bodies import LineCharge, LineSolenoid, MagneticDipole, PointCharge
from darwinics.errors import OnAxisError
from darwinics.fields import solenoid_moment_density, solenoid_vector_potential
from darwinics.forces import (
    ForceField,
    StraightPath,
    ab_force_on_charge,
    ab_force_on_solenoid,
    ac_force_on_loop,
    ac_force_on_wire,
    charge_force_fig5_closed_form,
    charge_zero_force_quadrature,
    force_on_charge_from_loop,
    force_on_loop_from_charge,
    loop_force_by_wire_quadrature,
    loop_force_fig5_closed_form,
    loop_lorentz_force_extrapolated,
    solenoid_force_by_slice_quadrature,
    straight_path_displacement,
    straight_path_impulse,
    straight_path_partial_impulse,
)
from darwinics.units import Units

RNG = np.random.default_rng(19620101)
UNITS = Units(c=10.0, hbar=1.0)


def make_pair(rel_pos, mu=1.3, v_q=2.0):
    charge = PointCharge(q=1.7, m=1.0, r=rel_pos, v=[v_q, 0, 0])
    dipole = MagneticDipole(mu=[0, 0, mu], m=1.0, r=[0, 0, 0], v=[0, 0, 0])
    return charge, dipole


class TestLoopChargePair:
    def test_fig5_closed_form_matches_general(self):
        for _ in range(20):
            rel = RNG.uniform(-2, 2, 3)
            if np.linalg.norm(rel) < 0.5:
                continue
            charge, dipole = make_pair(rel)
            general = force_on_loop_from_charge(charge, dipole, UNITS)
            closed = loop_force_fig5_closed_form(dipole.mu[2], charge.q,
                                                 charge.v[0], rel, UNITS)
            np.testing.assert_allclose(general, closed, rtol=1e-12)
            general_q = force_on_charge_from_loop(charge, dipole, UNITS)
            closed_q = charge_force_fig5_closed_form(dipole.mu[2], charge.q,
                                                     charge.v[0], rel, UNITS)
            np.testing.assert_allclose(general_q, closed_q, rtol=1e-12)

    def test_loop_force_on_axis_value(self):
        # right-handed convention: charge above the loop moving +x pulls the
        # loop along +y (the clockwise-wound variant is the negative)
        z = 1.7
        charge, dipole = make_pair([0, 0, z], mu=0.9, v_q=1.1)
        f = force_on_loop_from_charge(charge, dipole, UNITS)
        expected = 0.9 * charge.q * 1.1 / (UNITS.c * z**3)
        np.testing.assert_allclose(f, [0, expected, 0], rtol=1e-13, atol=1e-16)

    def test_loop_force_zero_velocity(self):
        charge, dipole = make_pair([1, 1, 0.5], v_q=0.0)
        np.testing.assert_allclose(
            force_on_loop_from_charge(charge, dipole, UNITS), 0.0, atol=1e-16)

    def test_loop_force_matches_discretized_lorentz_oracle(self):
        for _ in range(8):
            rel = RNG.uniform(-2, 2, 3)
            if np.linalg.norm(rel) < 0.8:
                rel = rel + np.array([1.5, 0, 0])
            mu_vec = RNG.uniform(-1, 1, 3)
            charge = PointCharge(q=1.3, m=1.0, r=rel, v=RNG.uniform(-1, 1, 3))
            dipole = MagneticDipole(mu=mu_vec, m=1.0, r=[0, 0, 0], v=[0, 0, 0])
            exact = force_on_loop_from_charge(charge, dipole, UNITS)
            oracle = loop_lorentz_force_extrapolated(
                charge, mu_vec, dipole.r, UNITS,
                radius=2e-3 * np.linalg.norm(rel), n_segments=720)
            np.testing.assert_allclose(oracle, exact, rtol=1e-6,
                                       atol=1e-9 * np.linalg.norm(exact))

    def test_charge_force_on_axis(self):
        # on-axis dipole field is 2 mu/z^3 zhat; the force is along -y
        z = 1.3
        charge, dipole = make_pair([0, 0, z], mu=0.8, v_q=1.5)
        f = force_on_charge_from_loop(charge, dipole, UNITS)
        mag = 2 * 0.8 * charge.q * 1.5 / (UNITS.c * z**3)
        np.testing.assert_allclose(f, [0, -mag, 0], rtol=1e-13)

    def test_charge_force_equatorial(self):
        x = 1.4
        charge, dipole = make_pair([x, 0, 0], mu=0.8, v_q=1.5)
        f = force_on_charge_from_loop(charge, dipole, UNITS)
        mag = 0.8 * charge.q * 1.5 / (UNITS.c * x**3)
        np.testing.assert_allclose(f, [0, mag, 0], rtol=1e-13)

    def test_charge_force_zero_velocity(self):
        charge, dipole = make_pair([1, -1, 2], v_q=0.0)
        np.testing.assert_allclose(
            force_on_charge_from_loop(charge, dipole, UNITS), 0.0, atol=1e-16)

    def test_pair_not_equal_and_opposite(self):
        # generic configuration x = y = z = R/sqrt(3)
        a = 1.0
        charge, dipole = make_pair([a, a, a])
        f_mu = force_on_loop_from_charge(charge, dipole, UNITS)
        f_q = force_on_charge_from_loop(charge, dipole, UNITS)
        residual = np.linalg.norm(f_mu + f_q)
        assert residual > 0.1 * max(np.linalg.norm(f_mu), np.linalg.norm(f_q))


class TestFluxLineForces:
    def test_charge_force_exactly_zero(self):
        s = LineSolenoid(flux=2.5)
        for _ in range(5):
            charge = PointCharge(q=RNG.uniform(-2, 2), m=1.0,
                                 r=RNG.uniform(1, 2, 3),
                                 v=RNG.uniform(-1, 1, 3))
            assert np.all(ab_force_on_charge(charge, s) == 0.0)

    def test_charge_force_on_axis_raises(self):
        s = LineSolenoid(flux=1.0)
        with pytest.raises(OnAxisError):
            ab_force_on_charge(PointCharge(q=1, m=1, r=[0, 0, 2], v=[1, 0, 0]), s)

    def test_zero_force_quadrature_decay(self):
        # the per-slice field force integrates to zero with a <= C/Z^2 tail
        s = LineSolenoid(flux=2.0)
        charge = PointCharge(q=1.0, m=1.0, r=[1.0, 0.5, 0.0], v=[1.0, 0, 0])
        vals = [np.linalg.norm(
            charge_zero_force_quadrature(charge, s, UNITS, z_cut=z))
            for z in (20.0, 40.0, 80.0)]
        assert vals[1] < vals[0] / 3.0
        assert vals[2] < vals[1] / 3.0

    def test_solenoid_force_matches_slice_quadrature(self):
        for conv in ("legacy", "standard"):
            for _ in range(6):
                charge = PointCharge(
                    q=RNG.uniform(0.5, 2), m=1.0,
                    r=np.append(RNG.uniform(0.7, 2, 2), RNG.uniform(-1, 1)),
                    v=np.append(RNG.uniform(-1, 1, 2), RNG.uniform(-1, 1)))
                s = LineSolenoid(flux=RNG.uniform(0.5, 3))
                closed = ab_force_on_solenoid(charge, s, UNITS,
                                              density_convention=conv)
                quad = solenoid_force_by_slice_quadrature(
                    charge, s, UNITS, z_cut=2000.0, density_convention=conv)
                np.testing.assert_allclose(quad, closed, rtol=2e-6,
                                           atol=1e-12 * np.linalg.norm(closed))

    def test_solenoid_force_axis_aligned_value(self):
        # charge straight above the axis in y, moving along +x
        q, flux, b, v = 1.2, 3.0, 0.8, 0.9
        charge = PointCharge(q=q, m=1.0, r=[0, b, 0], v=[v, 0, 0])
        s = LineSolenoid(flux=flux)
        f = ab_force_on_solenoid(charge, s, UNITS,
                                 density_convention="standard")
        expected_y = -q * flux * v / (2 * np.pi * UNITS.c * b**2)
        np.testing.assert_allclose(f, [0, expected_y, 0], atol=1e-15)

    def test_solenoid_force_diagonal_geometry(self):
        # dx = dy = b: pure x force of magnitude (2 kappa q v / c) / (2 b^2)
        q, flux, b, v = 1.0, 2.0, 0.7, 1.3
        charge = PointCharge(q=q, m=1.0, r=[b, b, 0], v=[v, 0, 0])
        s = LineSolenoid(flux=flux)
        kappa = solenoid_moment_density(flux, UNITS, "legacy")
        f = ab_force_on_solenoid(charge, s, UNITS)
        np.testing.assert_allclose(
            f, [-(2 * kappa * q / UNITS.c) * v / (2 * b**2), 0, 0], atol=1e-15)

    def test_rotational_equivariance(self):
        charge = PointCharge(q=1.0, m=1.0, r=[1.2, 0.3, 0.0], v=[0.7, -0.4, 0.2])
        s = LineSolenoid(flux=1.5)
        alpha = 0.77
        rot = np.array([[np.cos(alpha), -np.sin(alpha), 0],
                        [np.sin(alpha), np.cos(alpha), 0],
                        [0, 0, 1]])
        f = ab_force_on_solenoid(charge, s, UNITS)
        charge_rot = PointCharge(q=1.0, m=1.0, r=rot @ charge.r,
                                 v=rot @ charge.v)
        f_rot = ab_force_on_solenoid(charge_rot, s, UNITS)
        np.testing.assert_allclose(f_rot, rot @ f, rtol=1e-12)

    def test_force_balances_field_momentum_change(self):
        # with the standard density, the force on the flux line is exactly
        # minus d/dt of the interaction field momentum (q/c) A_s(r_charge)
        q, flux, v = 1.1, 2.3, 0.8
        s = LineSolenoid(flux=flux)
        pos = np.array([0.4, 1.1, 0.0])
        vel = np.array([v, 0.3, 0.0])
        charge = PointCharge(q=q, m=1.0, r=pos, v=vel)
        f = ab_force_on_solenoid(charge, s, UNITS, density_convention="standard")
        dt = 1e-6
        p_plus = (q / UNITS.c) * solenoid_vector_potential(s, pos + vel * dt)
        p_minus = (q / UNITS.c) * solenoid_vector_potential(s, pos - vel * dt)
        dp_dt = (p_plus - p_minus) / (2 * dt)
        np.testing.assert_allclose(f, -dp_dt, rtol=1e-8)


class TestWireLoopForces:
    def test_wire_force_exactly_zero(self):
        w = LineCharge(lam=1.7)
        dip = MagneticDipole(mu=[0, 0, 1], m=1.0, r=[1, 1, 0], v=[0.5, 0, 0])
        assert np.all(ac_force_on_wire(dip, w) == 0.0)

    def test_wire_zero_force_quadrature_decay(self):
        w = LineCharge(lam=1.0, v=[0.5, 0, 0])
        dip = MagneticDipole(mu=[0, 0, 1.0], m=1.0, r=[1.0, 0.4, 0], v=[0, 0, 0])
        vals = [np.linalg.norm(
            charge_zero_force_quadrature(dip, w, UNITS, z_cut=z))
            for z in (20.0, 40.0, 80.0)]
        assert vals[1] < vals[0] / 3.0
        assert vals[2] < vals[1] / 3.0

    def test_loop_force_matches_wire_quadrature(self):
        for _ in range(6):
            dip = MagneticDipole(
                mu=[0, 0, RNG.uniform(0.5, 2)], m=1.0,
                r=np.append(RNG.uniform(0.7, 2, 2), 0.0),
                v=np.append(RNG.uniform(-0.5, 0.5, 2), 0.0))
            w = LineCharge(lam=RNG.uniform(0.5, 2),
                           v=np.append(RNG.uniform(-1, 1, 2), 0.0))
            closed = ac_force_on_loop(dip, w, UNITS)
            quad = loop_force_by_wire_quadrature(dip, w, UNITS, z_cut=2000.0)
            np.testing.assert_allclose(quad, closed, rtol=2e-6,
                                       atol=1e-12 * np.linalg.norm(closed))

    def test_loop_force_axis_aligned_value(self):
        lam, mu, b, v = 1.5, 0.9, 0.6, 1.1
        dip = MagneticDipole(mu=[0, 0, mu], m=1.0, r=[0, -b, 0], v=[0, 0, 0])
        w = LineCharge(lam=lam, v=[v, 0, 0])
        f = ac_force_on_loop(dip, w, UNITS)
        np.testing.assert_allclose(
            f, [0, -(2 * lam * mu * v) / (UNITS.c * b**2), 0], atol=1e-15)

    def test_zero_relative_velocity(self):
        dip = MagneticDipole(mu=[0, 0, 1], m=1.0, r=[1, 0, 0], v=[0.4, 0, 0])
        w = LineCharge(lam=1.0, v=[0.4, 0, 0])
        np.testing.assert_allclose(ac_force_on_loop(dip, w, UNITS), 0.0)

    def test_tilted_moment_rejected(self):
        dip = MagneticDipole(mu=[0.3, 0, 1], m=1.0, r=[1, 0, 0], v=[0, 0, 0])
        w = LineCharge(lam=1.0, v=[1, 0, 0])
        with pytest.raises(ValueError):
            ac_force_on_loop(dip, w, UNITS)

    def test_shared_angular_structure_with_flux_line_force(self):
        # same in-plane geometry => parallel force directions
        delta = np.array([0.9, -0.5])
        charge = PointCharge(q=1.0, m=1.0, r=[delta[0], delta[1], 0], v=[1, 0, 0])
        s = LineSolenoid(flux=1.0)
        f_ab = ab_force_on_solenoid(charge, s, UNITS)
        dip = MagneticDipole(mu=[0, 0, 1.0], m=1.0,
                             r=[-delta[0], -delta[1], 0], v=[0, 0, 0])
        w = LineCharge(lam=1.0, v=[1, 0, 0])
        f_ac = ac_force_on_loop(dip, w, UNITS)
        cosine = (f_ab @ f_ac) / (np.linalg.norm(f_ab) * np.linalg.norm(f_ac))
        assert cosine == pytest.approx(1.0, abs=1e-12)


def ab_force_field(charge_template, s, units, convention="standard"):
    def fn(r, v, t):
        probe = PointCharge(q=charge_template.q, m=charge_template.m, r=r, v=v)
        return ab_force_on_solenoid(probe, s, units,
                                    density_convention=convention)
    return ForceField(system="flux-line", target="on_solenoid", fn=fn,
                      reference=s.axis_xy)


def ac_force_field(dipole_template, w, units):
    def fn(r, v, t):
        probe = MagneticDipole(mu=dipole_template.mu, m=dipole_template.m,
                               r=r, v=v)
        return ac_force_on_loop(probe, w, units)
    return ForceField(system="wire-loop", target="on_loop", fn=fn,
                      reference=w.axis_xy)


class TestStraightPathIntegrals:
    def setup_method(self):
        self.q, self.flux, self.b, self.v = 1.0, 2.0, 1.0, 0.5
        self.s = LineSolenoid(flux=self.flux)
        self.charge = PointCharge(q=self.q, m=1.0, r=[0, self.b, 0],
                                  v=[self.v, 0, 0])
        self.field = ab_force_field(self.charge, self.s, UNITS)
        self.path = StraightPath(start=[-1.0, self.b, 0.0],
                                 velocity=[self.v, 0, 0])
        kappa = solenoid_moment_density(self.flux, UNITS, "standard")
        # closed-form half-passage impulse magnitude 2 kappa q / (c b)
        self.peak_impulse = 2 * kappa * self.q / (UNITS.c * self.b)

    def test_full_passage_impulse_vanishes(self):
        impulse, err = straight_path_impulse(self.field, self.path,
                                             scale_floor=self.peak_impulse)
        assert np.linalg.norm(impulse) < 1e-8 * self.peak_impulse
        assert err < 1e-8 * self.peak_impulse

    def test_half_passage_impulse_closed_form(self):
        t_star, b = self.path.closest_approach(self.field.reference)
        impulse, _ = straight_path_partial_impulse(
            self.field, self.path, t_upper=t_star,
            scale_floor=self.peak_impulse)
        assert abs(impulse[0]) == pytest.approx(self.peak_impulse, rel=1e-8)
        assert abs(impulse[1]) < 1e-10 * self.peak_impulse

    def test_wire_loop_full_impulse_vanishes(self):
        dip = MagneticDipole(mu=[0, 0, 1.2], m=1.0, r=[0, 0.8, 0], v=[0, 0, 0])
        w = LineCharge(lam=1.5, v=[0, 0, 0])
        field = ac_force_field(dip, w, UNITS)
        # the moment rides the straight path past the wire
        path = StraightPath(start=[-2.0, 0.8, 0.0], velocity=[0.7, 0, 0])
        scale = 2 * w.lam * 1.2 / (UNITS.c * 0.8)
        impulse, _ = straight_path_impulse(field, path, scale_floor=scale)
        assert np.linalg.norm(impulse) < 1e-8 * scale

    def test_displacement_zero_field(self):
        null = ForceField(system="none", target="none",
                          fn=lambda r, v, t: np.zeros(3),
                          reference=np.zeros(3))
        path = StraightPath(start=[-1, 1, 0], velocity=[1, 0, 0])
        disp, _ = straight_path_displacement(null, path, mass=2.0,
                                             scale_floor=1.0)
        np.testing.assert_allclose(disp, 0.0, atol=1e-14)

    def test_displacement_nonzero_with_zero_impulse(self):
        disp, _ = straight_path_displacement(self.field, self.path, mass=1.0,
                                             scale_floor=self.peak_impulse)
        impulse, _ = straight_path_impulse(self.field, self.path,
                                           scale_floor=self.peak_impulse)
        assert np.linalg.norm(impulse) < 1e-8 * self.peak_impulse
        assert np.linalg.norm(disp) > 1e3 * np.linalg.norm(impulse)

    def test_displacement_scalings(self):
        disp1, _ = straight_path_displacement(self.field, self.path, mass=1.0,
                                              scale_floor=self.peak_impulse)
        s2 = LineSolenoid(flux=2 * self.flux)
        field2 = ab_force_field(self.charge, s2, UNITS)
        disp2, _ = straight_path_displacement(field2, self.path, mass=1.0,
                                              scale_floor=self.peak_impulse)
        np.testing.assert_allclose(disp2, 2 * disp1, rtol=1e-9)
        disp_half, _ = straight_path_displacement(self.field, self.path,
                                                  mass=2.0,
                                                  scale_floor=self.peak_impulse)
        np.testing.assert_allclose(disp_half, disp1 / 2, rtol=1e-9)
