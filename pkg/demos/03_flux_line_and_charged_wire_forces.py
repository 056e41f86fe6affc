"""Forces in the flux-line and charged-wire systems.

Stack the loop of demo 02 into an infinite flux line (or smear the charge
into an infinite wire) and integrate the per-constituent forces.  In each
system one partner feels exactly nothing while the other is pushed; in
the constrained description nothing moves at all.  The whole-passage
impulse on the pushed partner still integrates to zero.
"""

import numpy as np

from darwinics import LineCharge, LineSolenoid, MagneticDipole, PointCharge, \
    Units
from darwinics.constrained import (ab_lagrangian_system, ac_lagrangian_system,
                                   numeric_euler_lagrange)
from darwinics.forces import (ForceField, StraightPath, ab_force_on_charge,
                              ab_force_on_solenoid, ac_force_on_loop,
                              ac_force_on_wire, straight_path_displacement,
                              straight_path_impulse)

units = Units(c=10.0, hbar=1.0)

print("=== flux line: the charge feels nothing, the line is pushed ===")
sol = LineSolenoid(flux=2.0)
charge = PointCharge(q=1.0, m=1.0, r=[0.0, 1.0, 0.0], v=[0.5, 0, 0])
print(f"force on charge  : {ab_force_on_charge(charge, sol)}")
print(f"force on the line: {ab_force_on_solenoid(charge, sol, units)}")

print("\n=== charged wire: dual roles ===")
wire = LineCharge(lam=1.5)
moment = MagneticDipole(mu=[0, 0, 0.9], m=1.0, r=[0.0, 1.0, 0.0],
                        v=[0.5, 0, 0])
print(f"force on wire    : {ac_force_on_wire(moment, wire)}")
print(f"force on moment  : {ac_force_on_loop(moment, wire, units)}")

print("\n=== whole-passage bookkeeping (unconstrained) ===")
field = ForceField(
    "ab", "on_solenoid",
    lambda r, v, t: ab_force_on_solenoid(
        PointCharge(q=1.0, m=1.0, r=r, v=v), sol, units),
    reference=sol.axis_xy)
path = StraightPath(start=[-1.0, 1.0, 0.0], velocity=[0.5, 0, 0])
impulse, err = straight_path_impulse(field, path, scale_floor=1e-3)
disp, _ = straight_path_displacement(field, path, mass=1.0, scale_floor=1e-3)
print(f"net impulse on the line over the full passage: {impulse} "
      f"(err ~ {err:.1e})")
print(f"yet its displacement at the window's end      : {disp}")

print("\n=== constrained description: nothing accelerates ===")
ab_sys = ab_lagrangian_system(charge, sol, units)
state_r = np.array([0.0, 1.0, 0.0, 0.0, 0.0])
state_v = np.array([0.5, 0.2, 0.1, 0.0, 0.0])
print(f"finite-difference accelerations (flux line): "
      f"{numeric_euler_lagrange(ab_sys, state_r, state_v)}")
ac_sys = ac_lagrangian_system(moment, wire, units)
print(f"finite-difference accelerations (wire)     : "
      f"{numeric_euler_lagrange(ac_sys, state_r, state_v)}")
