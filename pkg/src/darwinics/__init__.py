"""Order-(v/c)^2 classical dynamics of charge, moment, and flux-line
systems, with conservation ledgers, field-momentum accounting, quantum
phase shifts, and feasibility estimates."""

__version__ = "0.1.0"

from .bodies import (CurrentLoop, LineCharge, LineSolenoid, MagneticDipole,
                     PointCharge, vec3)
from .units import NATURAL, Units

__all__ = [
    "__version__", "Units", "NATURAL", "vec3",
    "PointCharge", "MagneticDipole", "LineSolenoid", "LineCharge",
    "CurrentLoop",
]
