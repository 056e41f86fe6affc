"""Unit system handling.

The dynamical core works in Gaussian (CGS) units throughout: Coulomb
energy is q1*q2/r, magnetic couplings carry explicit 1/c factors, and E
and B share units.  The speed of light and hbar are configurable so that
tests and demos can run nondimensionally (q = m = r = 1 with a large c).
SI appears only in the order-of-magnitude estimate layer and at the
scenario boundary, through the converters below.
"""

from __future__ import annotations

from dataclasses import dataclass

# Physical constants, Gaussian/CGS
C_LIGHT_CGS = 2.99792458e10      # cm/s
HBAR_CGS = 1.0545718e-27         # erg*s

# Physical constants, SI (used by the estimates layer)
C_LIGHT_SI = 2.99792458e8        # m/s
HBAR_SI = 1.0545718e-34          # J*s
ELEMENTARY_CHARGE_SI = 1.602176634e-19   # C
ELECTRON_MASS_SI = 9.1093837015e-31      # kg
K_BOLTZMANN_SI = 1.380649e-23            # J/K
MU0_SI = 1.25663706212e-6                # N/A^2
ELECTRON_REST_ENERGY_EV = 510998.95      # eV


@dataclass(frozen=True)
class Units:
    """Gaussian unit context: speed of light and hbar.

    Defaults are the physical CGS values; nondimensional runs override c
    (and usually set hbar = 1).
    """

    c: float = C_LIGHT_CGS
    hbar: float = HBAR_CGS

    def __post_init__(self):
        if not (self.c > 0.0):
            raise ValueError("c must be positive")
        if not (self.hbar > 0.0):
            raise ValueError("hbar must be positive")


#: Convenient nondimensional context for tests and demos.
NATURAL = Units(c=1.0, hbar=1.0)


# ---------------------------------------------------------------------------
# SI <-> Gaussian converters (only the quantities the scenario layer needs)
# ---------------------------------------------------------------------------

def charge_si_to_gaussian(coulomb: float) -> float:
    """C -> statC."""
    return coulomb * 2.99792458e9


def length_si_to_gaussian(meter: float) -> float:
    """m -> cm."""
    return meter * 100.0


def mass_si_to_gaussian(kilogram: float) -> float:
    """kg -> g."""
    return kilogram * 1000.0


def velocity_si_to_gaussian(mps: float) -> float:
    """m/s -> cm/s."""
    return mps * 100.0


def magnetic_flux_si_to_gaussian(weber: float) -> float:
    """Wb -> G*cm^2 (maxwell)."""
    return weber * 1e8


def linear_charge_density_si_to_gaussian(c_per_m: float) -> float:
    """C/m -> statC/cm."""
    return charge_si_to_gaussian(c_per_m) / 100.0


def magnetic_moment_si_to_gaussian(j_per_t: float) -> float:
    """J/T -> erg/G."""
    return j_per_t * 1e3
