"""Two crossed charges: where does the missing momentum go?

One charge heads along x toward another that is moving along y.  The
magnetic parts of their Lorentz forces do not balance, so the summed
mechanical momentum changes during the encounter.  The canonical momentum
(mechanical plus the interaction's vector-potential part) stays flat to
the integrator tolerance: the difference is momentum carried by the
electromagnetic field.
"""

from darwinics import Units
from darwinics.darwin import (darwin_accelerations,
                              feynman_accelerations_closed_form,
                              feynman_state, lorentz_expanded_accelerations)
from darwinics.engine import darwin_system, integrate, ledger_report

units = Units(c=100.0, hbar=1.0)
q = m = r = 1.0
v = 10.0

print("=== instantaneous accelerations at the crossed-beam configuration ===")
state = feynman_state(q, m, r, v, units)
acc = darwin_accelerations(state)
closed = feynman_accelerations_closed_form(q, m, r, v, units.c)
expanded = lorentz_expanded_accelerations(q, m, r, v, units.c)
print(f"coupled-solve   a1 = {acc.a1[:2]}, a2 = {acc.a2[:2]}")
print(f"closed form     a1 = {closed[:2]}, a2 = {closed[2:]}")
print(f"Lorentz 2nd ord a1 = {expanded[:2]}, a2 = {expanded[2:]}")
print(f"-> the y-force on body 1 has no partner: a1y = {closed[1]:.3e} "
      f"while a2y = {closed[3]:.3e}\n")

print("=== ten crossing times of integration ===")
system = darwin_system(state.body1, state.body2, units)
traj = integrate(system, 0.0, 10 * r / v, tol=1e-10, n_samples=101)
rep = ledger_report(traj)
p_mech = traj.ledgers["p_mech"]
p_can = traj.ledgers["p_canonical"]
print(f"mechanical momentum change : {p_mech[-1] - p_mech[0]}")
print(f"canonical momentum drift   : {rep['p_canonical_drift']:.2e} (relative)")
print(f"energy drift               : {rep['energy_drift']:.2e}")
print(f"d(p_mech)/dt + d(p_field)/dt residual: "
      f"{rep['momentum_balance_residual']:.2e}")
print("\nThe mechanical books don't balance; mechanical + field momentum do.")
