"""Are real sources constrained or unconstrained?  Back-of-envelope pass.

For the micron-scale coil of the classic electron-interference
experiments, conduction electrons wander less than the wire is thick
during one passage, so the unconstrained picture is at least tenable.
For a neutron modeled as a femtometer current loop, the constituents
circulate ~1e17 times per passage: thoroughly constrained.
"""

from darwinics.estimates import (SolenoidExperiment, neutron_report,
                                 solenoid_experiment_report)

print(solenoid_experiment_report().to_table())
print()
print(neutron_report().to_table())
print()
print("hotter coil, same machinery:")
hot = solenoid_experiment_report(SolenoidExperiment(temperature=1200.0))
entry = hot.entry("thermal_displacement")
print(f"  at 1200 K the thermal excursion grows to {entry.value:.3e} m "
      "(still far under the wire diameter)")
