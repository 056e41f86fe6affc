"""Two-body dynamics: Lagrangian, coupled accelerations, closed forms."""

import numpy as np
import pytest

from darwinics.bodies import PointCharge
from darwinics.darwin import (
    AccelPair,
    TwoBodyState,
    canonical_momenta,
    darwin_accelerations,
    darwin_energy,
    darwin_lagrangian,
    euler_lagrange_residual,
    feynman_accelerations_closed_form,
    feynman_state,
    interaction_field_momentum,
    lorentz_expanded_accelerations,
)
from darwinics.errors import OutOfRegimeError
from darwinics.fields import darwin_vector_potential
from darwinics.units import Units

RNG = np.random.default_rng(7)


def random_state(c=50.0, qq_sign=1.0):
    units = Units(c=c, hbar=1.0)
    r1 = RNG.uniform(-1, 1, 3)
    r2 = r1 + (lambda d: d / np.linalg.norm(d) * RNG.uniform(0.8, 2.0))(
        RNG.uniform(-1, 1, 3))
    v1 = RNG.uniform(-0.1, 0.1, 3) * c
    v2 = RNG.uniform(-0.1, 0.1, 3) * c
    b1 = PointCharge(q=1.0, m=1.0, r=r1, v=v1)
    b2 = PointCharge(q=qq_sign * 1.0, m=1.3, r=r2, v=v2)
    return TwoBodyState(b1, b2, units)


class TestLagrangian:
    def test_static_coulomb_only(self):
        units = Units(c=1.0, hbar=1.0)
        b1 = PointCharge(q=1.0, m=1.0, r=[0, 0, 0], v=[0, 0, 0])
        b2 = PointCharge(q=1.0, m=1.0, r=[2, 0, 0], v=[0, 0, 0])
        assert darwin_lagrangian(TwoBodyState(b1, b2, units)) == pytest.approx(-0.5)

    def test_parallel_velocities_perpendicular_to_separation(self):
        units = Units(c=1.0, hbar=1.0)
        v = 0.3
        b1 = PointCharge(q=1.0, m=1.0, r=[0, 0, 0], v=[v, 0, 0])
        b2 = PointCharge(q=1.0, m=1.0, r=[0, 1, 0], v=[v, 0, 0])
        val = darwin_lagrangian(TwoBodyState(b1, b2, units))
        assert val == pytest.approx(v**2 - 1.0 + v**2 / 2.0, rel=1e-13)

    def test_against_independent_termwise_sum(self):
        for _ in range(20):
            s = random_state()
            b1, b2, c = s.body1, s.body2, s.units.c
            d = b1.r - b2.r
            r = np.linalg.norm(d)
            expected = (0.5 * b1.m * b1.v @ b1.v + 0.5 * b2.m * b2.v @ b2.v
                        - b1.q * b2.q / r
                        + b1.q * b2.q / (2 * r * c**2)
                        * (b1.v @ b2.v + (b1.v @ d) * (b2.v @ d) / r**2))
            assert darwin_lagrangian(s) == pytest.approx(expected, rel=1e-12)


class TestAccelerations:
    def test_coulomb_limit(self):
        s = feynman_state(q=1.0, m=1.0, r=1.0, v=0.0, units=Units(c=1e8, hbar=1.0))
        acc = darwin_accelerations(s)
        np.testing.assert_allclose(acc.a1, [-1, 0, 0], atol=1e-8)
        np.testing.assert_allclose(acc.a2, [1, 0, 0], atol=1e-8)

    def test_matches_closed_form_at_crossed_beam_state(self):
        q = m = r = 1.0
        for v, c in [(10.0, 100.0), (1.0, 20.0), (3.0, 60.0)]:
            s = feynman_state(q, m, r, v, Units(c=c, hbar=1.0))
            acc = darwin_accelerations(s)
            a1x, a1y, a2x, a2y = feynman_accelerations_closed_form(q, m, r, v, c)
            np.testing.assert_allclose(acc.a1, [a1x, a1y, 0.0], rtol=1e-10, atol=1e-14)
            np.testing.assert_allclose(acc.a2, [a2x, a2y, 0.0], rtol=1e-10, atol=1e-14)

    def test_closed_form_matches_solver_for_random_regime_points(self):
        q = m = 1.0
        for _ in range(50):
            r = RNG.uniform(0.5, 3.0)
            c = RNG.uniform(20.0, 200.0)
            v = RNG.uniform(0.02, 0.2) * c
            s = feynman_state(q, m, r, v, Units(c=c, hbar=1.0))
            acc = darwin_accelerations(s)
            a1x, a1y, a2x, a2y = feynman_accelerations_closed_form(q, m, r, v, c)
            got = np.array([acc.a1[0], acc.a1[1], acc.a2[0], acc.a2[1]])
            np.testing.assert_allclose(got, [a1x, a1y, a2x, a2y], rtol=1e-10)

    def test_label_swap_symmetry(self):
        s = random_state()
        swapped = TwoBodyState(s.body2, s.body1, s.units)
        acc = darwin_accelerations(s)
        acc_sw = darwin_accelerations(swapped)
        np.testing.assert_allclose(acc_sw.a1, acc.a2, rtol=1e-12)
        np.testing.assert_allclose(acc_sw.a2, acc.a1, rtol=1e-12)

    def test_residuals_vanish(self):
        for _ in range(10):
            s = random_state()
            acc = darwin_accelerations(s)
            res1, res2 = euler_lagrange_residual(s, acc)
            scale = max(np.linalg.norm(acc.a1), np.linalg.norm(acc.a2), 1e-30)
            assert res1 < 1e-11 * scale
            assert res2 < 1e-11 * scale

    def test_residual_nonzero_for_wrong_accelerations(self):
        s = random_state()
        acc = darwin_accelerations(s)
        bad = AccelPair(acc.a1 + [0.1, 0, 0], acc.a2)
        res1, _ = euler_lagrange_residual(s, bad)
        assert res1 > 1e-3

    def test_coulomb_reduction_as_c_grows(self):
        # relative deviation from the pure Coulomb accelerations is bounded
        # by 10 (v/c)^2 + 10 q^2/(m c^2 r)
        for c in (30.0, 100.0, 1000.0):
            units = Units(c=c, hbar=1.0)
            b1 = PointCharge(q=1.0, m=1.0, r=[0, 0, 0], v=[1.0, 0.5, 0.0])
            b2 = PointCharge(q=1.0, m=1.3, r=[1.2, 0.4, 0.0], v=[0.0, 1.0, 0.3])
            s = TwoBodyState(b1, b2, units)
            acc = darwin_accelerations(s)
            d = b1.r - b2.r
            r = np.linalg.norm(d)
            f_coul = b1.q * b2.q * d / r**3
            a1_c, a2_c = f_coul / b1.m, -f_coul / b2.m
            vmax = max(np.linalg.norm(b1.v), np.linalg.norm(b2.v))
            bound = 10 * (vmax / c) ** 2 + 10 * b1.q * b2.q / (b1.m * c**2 * r)
            dev = max(
                np.linalg.norm(acc.a1 - a1_c) / np.linalg.norm(a1_c),
                np.linalg.norm(acc.a2 - a2_c) / np.linalg.norm(a2_c))
            assert dev < bound


class TestFeynmanClosedForm:
    def test_spec_point(self):
        a1x, a1y, a2x, a2y = feynman_accelerations_closed_form(1, 1, 1, 10.0, 100.0)
        assert a1x == pytest.approx(-1.005, abs=2e-4)
        assert a1y == pytest.approx(-0.01, rel=1e-4)
        assert a2x == pytest.approx(0.99, abs=2e-4)
        assert a2y == pytest.approx(5e-7, rel=1e-4)

    def test_static_limit(self):
        vals = feynman_accelerations_closed_form(1, 1, 1, 0.0, 1e8)
        np.testing.assert_allclose(vals, [-1, 0, 1, 0], atol=1e-8)

    def test_out_of_regime(self):
        with pytest.raises(OutOfRegimeError):
            feynman_accelerations_closed_form(1.0, 1.0, 1.0, 0.1, 0.9)

    def test_mechanical_momentum_imbalance(self):
        # crossed-beam y-forces are lopsided when q^2/(m c^2 r) << (v/c)^2
        _, a1y, _, a2y = feynman_accelerations_closed_form(1, 1, 1, 10.0, 100.0)
        assert abs(a1y) > 100 * abs(a2y)


class TestLorentzExpansion:
    def test_spec_point(self):
        a1x, a1y, a2x, a2y = lorentz_expanded_accelerations(1, 1, 1, 10.0, 100.0)
        assert a1x == pytest.approx(-1.00504, abs=1e-5)
        assert a1y == pytest.approx(-0.0100504, abs=1e-6)
        assert a2x == pytest.approx(0.99, abs=1e-12)
        assert a2y == 0.0

    def test_static_limit(self):
        np.testing.assert_allclose(
            lorentz_expanded_accelerations(1, 1, 1, 0.0, 10.0), [-1, 0, 1, 0])

    def test_agreement_with_closed_form_over_speed_scan(self):
        # the two routes agree up to O((v/c)^4) and O(q^2/(m c^2 r))
        q = m = 1.0
        r, c = 1.0, 1000.0
        x = q**2 / (m * c**2 * r)
        for beta in [0.01, 0.02, 0.05, 0.1, 0.2]:
            v = beta * c
            exact = np.array(feynman_accelerations_closed_form(q, m, r, v, c))
            lorentz = np.array(lorentz_expanded_accelerations(q, m, r, v, c))
            bound = 2.0 * beta**4 + 2.0 * x
            scale = q**2 / (m * r**2)
            assert np.all(np.abs(exact - lorentz) <= bound * scale)


class TestMomenta:
    def test_at_rest(self):
        units = Units(c=2.0, hbar=1.0)
        b1 = PointCharge(q=1.0, m=1.0, r=[0, 0, 0], v=[0, 0, 0])
        b2 = PointCharge(q=1.0, m=1.0, r=[1, 0, 0], v=[0, 0, 0])
        p1, p2 = canonical_momenta(TwoBodyState(b1, b2, units))
        np.testing.assert_allclose(p1, 0.0)
        np.testing.assert_allclose(p2, 0.0)

    def test_interaction_part_is_vector_potential_coupling(self):
        for _ in range(10):
            s = random_state()
            p1, _ = canonical_momenta(s)
            a2_at_1 = darwin_vector_potential(s.body2.q, s.body2.v, s.body2.r,
                                              s.body1.r, s.units)
            expected = s.body1.m * s.body1.v + (s.body1.q / s.units.c) * a2_at_1
            np.testing.assert_allclose(p1, expected, rtol=1e-13)

    def test_field_momentum_definition_and_cancellation(self):
        s = random_state()
        p1, p2 = canonical_momenta(s)
        mech = s.body1.m * s.body1.v + s.body2.m * s.body2.v
        np.testing.assert_allclose(interaction_field_momentum(s),
                                   p1 + p2 - mech, rtol=1e-12, atol=1e-16)
        # opposite velocities cancel the interaction momentum
        units = Units(c=10.0, hbar=1.0)
        b1 = PointCharge(q=1.0, m=1.0, r=[0, 0, 0], v=[0.3, 0.1, 0])
        b2 = PointCharge(q=1.0, m=1.0, r=[1, 1, 0], v=[-0.3, -0.1, 0])
        np.testing.assert_allclose(
            interaction_field_momentum(TwoBodyState(b1, b2, units)), 0.0,
            atol=1e-16)

    def test_energy_value(self):
        s = random_state()
        # energy counts the velocity coupling once with flipped Coulomb sign
        b1, b2, c = s.body1, s.body2, s.units.c
        d = b1.r - b2.r
        r = np.linalg.norm(d)
        expected = (0.5 * b1.m * b1.v @ b1.v + 0.5 * b2.m * b2.v @ b2.v
                    + b1.q * b2.q / r
                    + b1.q * b2.q / (2 * r * c**2)
                    * (b1.v @ b2.v + (b1.v @ d) * (b2.v @ d) / r**2))
        assert darwin_energy(s) == pytest.approx(expected, rel=1e-12)
