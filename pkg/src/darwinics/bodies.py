"""Vector helpers and the body/source types used throughout the library.

Vectors are plain numpy arrays of shape (3,), float64.  Body classes are
small frozen-ish dataclasses that validate their invariants once, on
construction; all downstream operations are pure functions over them.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .units import Units

__all__ = [
    "vec3", "norm", "unit", "perp_xy",
    "PointCharge", "MagneticDipole", "LineSolenoid", "LineCharge",
    "CurrentLoop",
]


def vec3(x, y=None, z=None) -> np.ndarray:
    """Build a finite (3,) float vector from components or any 3-sequence."""
    if y is None and z is None:
        v = np.asarray(x, dtype=float)
    else:
        v = np.array([x, y, z], dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected 3 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector components: {v}")
    return v


def norm(v) -> float:
    return float(np.linalg.norm(v))


def unit(v) -> np.ndarray:
    n = norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return np.asarray(v, dtype=float) / n


def perp_xy(v) -> np.ndarray:
    """In-plane (x, y, 0) part of a vector; line sources live along z."""
    v = np.asarray(v, dtype=float)
    return np.array([v[0], v[1], 0.0])


def _check_speed(v: np.ndarray, units: Units | None):
    if units is not None and norm(v) >= units.c:
        raise ValueError(f"speed {norm(v):g} >= c = {units.c:g}")


@dataclass
class PointCharge:
    """Point charge: q (statC), m (g), position r (cm), velocity v (cm/s)."""

    q: float
    m: float
    r: np.ndarray
    v: np.ndarray
    units: Units | None = None

    def __post_init__(self):
        self.r = vec3(self.r)
        self.v = vec3(self.v)
        if not (self.m > 0.0):
            raise ValueError("mass must be positive")
        _check_speed(self.v, self.units)

    def with_state(self, r, v) -> "PointCharge":
        return replace(self, r=vec3(r), v=vec3(v))


@dataclass
class MagneticDipole:
    """Point magnetic dipole: moment mu (erg/G), m (g), r (cm), v (cm/s).

    The moment vector is held fixed: no torque dynamics.
    """

    mu: np.ndarray
    m: float
    r: np.ndarray
    v: np.ndarray
    units: Units | None = None

    def __post_init__(self):
        self.mu = vec3(self.mu)
        self.r = vec3(self.r)
        self.v = vec3(self.v)
        if not (self.m > 0.0):
            raise ValueError("mass must be positive")
        _check_speed(self.v, self.units)

    def with_state(self, r, v) -> "MagneticDipole":
        return replace(self, r=vec3(r), v=vec3(v))


def _check_line_velocity(v: np.ndarray):
    if v[2] != 0.0:
        raise ValueError("line sources translate rigidly in-plane: v_z must be 0")


@dataclass
class LineSolenoid:
    """Infinite solenoid along z: flux (G*cm^2), axis point (x, y) in cm.

    ``mass_per_length`` (g/cm) matters only when the solenoid is dynamic;
    the in-plane velocity describes rigid translation of the whole line.
    """

    flux: float
    axis_point: tuple[float, float] = (0.0, 0.0)
    mass_per_length: float = 1.0
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.v = vec3(self.v)
        _check_line_velocity(self.v)
        if not (self.mass_per_length > 0.0):
            raise ValueError("mass_per_length must be positive")
        self.axis_point = (float(self.axis_point[0]), float(self.axis_point[1]))

    @property
    def axis_xy(self) -> np.ndarray:
        return np.array([self.axis_point[0], self.axis_point[1], 0.0])


@dataclass
class LineCharge:
    """Infinite charged wire along z: lambda (statC/cm), axis point (x, y)."""

    lam: float
    axis_point: tuple[float, float] = (0.0, 0.0)
    mass_per_length: float = 1.0
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.v = vec3(self.v)
        _check_line_velocity(self.v)
        if not (self.mass_per_length > 0.0):
            raise ValueError("mass_per_length must be positive")
        self.axis_point = (float(self.axis_point[0]), float(self.axis_point[1]))

    @property
    def axis_xy(self) -> np.ndarray:
        return np.array([self.axis_point[0], self.axis_point[1], 0.0])


@dataclass
class CurrentLoop:
    """Circular current loop: radius (cm), current (statA), center, unit normal.

    The loop current circulates right-handedly about ``normal``, so its
    magnetic moment is ``current * pi * radius**2 / c`` along ``normal``.
    """

    radius: float
    current: float
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    normal: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        self.center = vec3(self.center)
        self.normal = vec3(self.normal)
        if not (self.radius > 0.0):
            raise ValueError("radius must be positive")
        n = norm(self.normal)
        if abs(n - 1.0) > 1e-12:
            self.normal = self.normal / n

    def moment(self, units: Units) -> np.ndarray:
        return (self.current * np.pi * self.radius**2 / units.c) * self.normal

    @classmethod
    def for_moment(cls, mu, radius: float, center, units: Units) -> "CurrentLoop":
        """Loop of given radius realizing the moment vector ``mu``."""
        mu = vec3(mu)
        mu_mag = norm(mu)
        if mu_mag == 0.0:
            raise ValueError("zero moment")
        current = mu_mag * units.c / (np.pi * radius**2)
        return cls(radius=radius, current=current, center=vec3(center),
                   normal=mu / mu_mag)

    def points_and_tangents(self, n_segments: int) -> tuple[np.ndarray, np.ndarray]:
        """Midpoints and tangent*dl vectors of an n-segment discretization."""
        e1, e2 = _orthonormal_frame(self.normal)
        theta = (np.arange(n_segments) + 0.5) * (2.0 * np.pi / n_segments)
        cos_t, sin_t = np.cos(theta)[:, None], np.sin(theta)[:, None]
        points = self.center + self.radius * (cos_t * e1 + sin_t * e2)
        dl = 2.0 * np.pi * self.radius / n_segments
        tangents = dl * (-sin_t * e1 + cos_t * e2)
        return points, tangents


def _orthonormal_frame(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors spanning the plane perpendicular to unit vector n."""
    helper = np.array([1.0, 0.0, 0.0])
    if abs(n[0]) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    e1 = unit(np.cross(n, helper))
    e2 = np.cross(n, e1)
    return e1, e2
