"""Unconstrained-description force fields and straight-path integrals.

Three interacting pairs are covered: point charge with a small current
loop, point charge with an infinite flux line, and a magnetic moment with
an infinite charged wire.  Forces are obtained by summing per-constituent
Lorentz forces, so action and reaction need not balance; the residual
momentum lives in the electromagnetic field.

Orientation convention: moments are right-handed (positive moment means
counterclockwise current about the moment vector), and all closed forms
are pinned to the Lorentz-force oracles below under that convention.
Derivations that wind the loop the other way flip the overall sign of
every loop-force expression; only the handedness changes, never the
magnitude or the angular structure.

The transverse-force angular structure shared by both line-source systems
is {2 dx dy xhat - (dx^2 - dy^2) yhat} / rho^4 for motion along x; for a
general in-plane relative velocity it is rotated covariantly (the systems
are symmetric about the line axis and the forces are linear in velocity).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bodies import CurrentLoop, LineCharge, LineSolenoid, MagneticDipole, \
    PointCharge, vec3
from .errors import NonConvergenceError, OnAxisError, SingularSeparationError
from .fields import charge_magnetic_field, dipole_magnetic_field, \
    solenoid_moment_density
from .units import Units

__all__ = [
    "ForceField", "StraightPath", "QuadratureConfig",
    "force_on_loop_from_charge", "force_on_charge_from_loop",
    "loop_force_fig5_closed_form", "charge_force_fig5_closed_form",
    "loop_lorentz_force_discretized", "loop_lorentz_force_extrapolated",
    "ab_force_on_charge", "ab_force_on_solenoid",
    "ac_force_on_wire", "ac_force_on_loop",
    "transverse_line_force",
    "solenoid_force_by_slice_quadrature", "charge_force_by_slice_quadrature",
    "loop_force_by_wire_quadrature", "charge_zero_force_quadrature",
    "straight_path_impulse", "straight_path_partial_impulse",
    "straight_path_displacement",
]


# ---------------------------------------------------------------------------
# Charge <-> small loop (point-dipole limit)
# ---------------------------------------------------------------------------

def force_on_loop_from_charge(charge: PointCharge, dipole: MagneticDipole,
                              units: Units, eps_sing=0.0) -> np.ndarray:
    """Magnetic force on a small rigid loop from a moving charge.

    Exact point-dipole limit of (1/c) integral J x B_charge: equals
    grad(mu . B_charge) at the loop (divergence-free B is all that is
    needed).  Linear in the charge velocity; any pose is allowed.
    """
    d = charge.r - dipole.r
    rmag = float(np.linalg.norm(d))
    if rmag <= eps_sing or rmag == 0.0:
        raise SingularSeparationError("charge coincides with loop")
    w = np.cross(dipole.mu, charge.v)
    return (charge.q / units.c) * (w / rmag**3 - 3.0 * (w @ d) * d / rmag**5)


def force_on_charge_from_loop(charge: PointCharge, dipole: MagneticDipole,
                              units: Units, eps_sing=0.0) -> np.ndarray:
    """Lorentz force (q/c) v x B_dipole on the charge."""
    b = dipole_magnetic_field(dipole.mu, dipole.r, charge.r, eps_sing)
    return (charge.q / units.c) * np.cross(charge.v, b)


def loop_force_fig5_closed_form(mu, q, v_q, rel_pos, units: Units) -> np.ndarray:
    """Closed form of the loop force for moment along z, charge moving
    along x at ``rel_pos`` = charge - loop.

    -(mu q v / c R^3) [3 (x y, y^2, y z)/R^2 - yhat]; the overall sign is
    the right-handed convention (the clockwise-wound variant is its
    negative).
    """
    x, y, z = vec3(rel_pos)
    rmag = float(np.linalg.norm(rel_pos))
    pref = mu * q * v_q / (units.c * rmag**3)
    bracket = np.array([3 * x * y, 3 * y * y, 3 * y * z]) / rmag**2
    bracket -= np.array([0.0, 1.0, 0.0])
    return -pref * bracket


def charge_force_fig5_closed_form(mu, q, v_q, rel_pos, units: Units) -> np.ndarray:
    """Closed form of the charge force for the same geometry:
    -(mu q v / c R^3) [3 (0, z^2, -y z)/R^2 - yhat]."""
    x, y, z = vec3(rel_pos)
    rmag = float(np.linalg.norm(rel_pos))
    pref = mu * q * v_q / (units.c * rmag**3)
    bracket = np.array([0.0, 3 * z * z, -3 * y * z]) / rmag**2
    bracket -= np.array([0.0, 1.0, 0.0])
    return -pref * bracket


def loop_lorentz_force_discretized(charge: PointCharge, loop: CurrentLoop,
                                   units: Units, n_segments: int = 720) -> np.ndarray:
    """(1/c) sum I dl x B_charge over a discretized loop."""
    points, tangents = loop.points_and_tangents(n_segments)
    b = charge_magnetic_field(charge.q, charge.v, charge.r, points, units)
    return (loop.current / units.c) * np.sum(np.cross(tangents, b), axis=0)


def loop_lorentz_force_extrapolated(charge: PointCharge, mu, loop_center,
                                    units: Units, radius: float,
                                    n_segments: int = 720) -> np.ndarray:
    """Richardson-extrapolated eps -> 0 limit of the discretized loop force.

    Two radii (eps, eps/2) cancel the O(eps^2) finite-size term.
    """
    f = []
    for eps in (radius, radius / 2.0):
        loop = CurrentLoop.for_moment(mu, eps, loop_center, units)
        f.append(loop_lorentz_force_discretized(charge, loop, units, n_segments))
    return (4.0 * f[1] - f[0]) / 3.0


# ---------------------------------------------------------------------------
# Line-source systems
# ---------------------------------------------------------------------------

def transverse_line_force(delta_xy, v_rel) -> np.ndarray:
    """Angular structure of the line-source forces, rotated for a general
    in-plane relative velocity.

    For v_rel along x this is v * {2 dx dy, -(dx^2 - dy^2), 0} / rho^4;
    the map is linear in v_rel and equivariant under rotations about z
    (axial velocity components exert no transverse force and are ignored).
    """
    zeta = complex(delta_xy[0], delta_xy[1])
    w = complex(v_rel[0], v_rel[1])
    rho2 = zeta.real**2 + zeta.imag**2
    f = -1j * w.conjugate() * zeta * zeta / rho2**2
    return np.array([f.real, f.imag, 0.0])


def ab_force_on_charge(charge: PointCharge, s: LineSolenoid,
                       eps_sing=0.0) -> np.ndarray:
    """Force on a charge outside an ideal flux line: exactly zero.

    There is no field on the charge's path; the per-slice Lorentz forces
    integrate to zero with a 1/Z^2 cutoff tail (see the quadrature oracle
    below).
    """
    rho = charge.r[:2] - np.asarray(s.axis_point)
    if np.linalg.norm(rho) <= eps_sing or np.linalg.norm(rho) == 0.0:
        raise OnAxisError("charge on the solenoid axis")
    return np.zeros(3)


def ab_force_on_solenoid(charge: PointCharge, s: LineSolenoid, units: Units,
                         eps_sing=0.0,
                         density_convention: str = "legacy") -> np.ndarray:
    """Net force per the per-slice sum on the flux line from a passing charge.

    Equals the z-integral of :func:`force_on_loop_from_charge` over dipole
    slices of moment density kappa: -(2 kappa q / c) * transverse structure,
    driven by the in-plane relative velocity.  With the ``standard``
    density this is exactly minus the time derivative of the interaction
    field momentum (q/c) A_s(r_charge).
    """
    delta = charge.r[:2] - np.asarray(s.axis_point)
    if np.linalg.norm(delta) <= eps_sing or np.linalg.norm(delta) == 0.0:
        raise OnAxisError("charge on the solenoid axis")
    kappa = solenoid_moment_density(s.flux, units, density_convention)
    v_rel = (charge.v - s.v)[:2]
    return -(2.0 * kappa * charge.q / units.c) * transverse_line_force(delta, v_rel)


def ac_force_on_wire(dipole: MagneticDipole, w: LineCharge,
                     eps_sing=0.0) -> np.ndarray:
    """Force on the charged wire from a passing moment: exactly zero."""
    rho = dipole.r[:2] - np.asarray(w.axis_point)
    if np.linalg.norm(rho) <= eps_sing or np.linalg.norm(rho) == 0.0:
        raise OnAxisError("dipole on the wire axis")
    return np.zeros(3)


def ac_force_on_loop(dipole: MagneticDipole, w: LineCharge, units: Units,
                     eps_sing=0.0) -> np.ndarray:
    """Net per-constituent force on the moment from the charged wire.

    z-integral of :func:`force_on_loop_from_charge` over wire charge
    elements lambda dz: -(2 lambda mu_z / c) * transverse structure, with
    the wire-relative in-plane velocity.  Requires the moment along the
    wire axis (z).
    """
    mu = dipole.mu
    if np.linalg.norm(mu[:2]) > 1e-12 * max(np.linalg.norm(mu), 1e-300):
        raise ValueError("closed form requires the moment along the wire axis")
    delta = np.asarray(w.axis_point) - dipole.r[:2]
    if np.linalg.norm(delta) <= eps_sing or np.linalg.norm(delta) == 0.0:
        raise OnAxisError("dipole on the wire axis")
    v_rel = (w.v - dipole.v)[:2]
    return -(2.0 * w.lam * mu[2] / units.c) * transverse_line_force(delta, v_rel)


# ---------------------------------------------------------------------------
# Slice-quadrature oracles (independent routes to the closed forms above)
# ---------------------------------------------------------------------------

def _z_quadrature(fn: Callable[[float], np.ndarray], z_cut: float,
                  limit: int = 200, tail_extrapolate: bool = True,
                  feature_z: float = 0.0) -> np.ndarray:
    from scipy.integrate import quad

    def window(zc):
        # the integrand is sharply peaked near the probe's height; breakpoints
        # keep the adaptive rule from overlooking it on a wide interval
        brk = [max(-zc, min(zc, feature_z + off)) for off in (-5.0, 0.0, 5.0)]
        out = np.empty(3)
        for i in range(3):
            val, _ = quad(lambda z: fn(z)[i], -zc, zc, limit=limit,
                          epsabs=1e-13, epsrel=1e-11, points=brk)
            out[i] = val
        return out

    if not tail_extrapolate:
        return window(z_cut)
    # the omitted tails fall off as 1/Z^2; one Richardson level in the
    # cutoff cancels the leading term
    i_z = window(z_cut)
    i_2z = window(2.0 * z_cut)
    return (4.0 * i_2z - i_z) / 3.0


def solenoid_force_by_slice_quadrature(charge: PointCharge, s: LineSolenoid,
                                       units: Units, z_cut: float = 400.0,
                                       density_convention: str = "legacy",
                                       tail_extrapolate: bool = True) -> np.ndarray:
    """Force on the flux line as the z-quadrature of per-slice loop forces."""
    kappa = solenoid_moment_density(s.flux, units, density_convention)
    axis = s.axis_xy
    v_rel = charge.v - s.v

    def integrand(z):
        slice_dipole = MagneticDipole(mu=[0, 0, kappa], m=1.0,
                                      r=axis + np.array([0, 0, z]),
                                      v=np.zeros(3))
        probe = PointCharge(q=charge.q, m=charge.m, r=charge.r, v=v_rel)
        return force_on_loop_from_charge(probe, slice_dipole, units)

    return _z_quadrature(integrand, z_cut, tail_extrapolate=tail_extrapolate,
                         feature_z=float(charge.r[2]))


def charge_force_by_slice_quadrature(charge: PointCharge, s: LineSolenoid,
                                     units: Units, z_cut: float = 400.0,
                                     density_convention: str = "legacy",
                                     tail_extrapolate: bool = True) -> np.ndarray:
    """Force on the charge as the z-quadrature of per-slice dipole fields."""
    kappa = solenoid_moment_density(s.flux, units, density_convention)
    axis = s.axis_xy
    v_rel = charge.v - s.v

    def integrand(z):
        slice_dipole = MagneticDipole(mu=[0, 0, kappa], m=1.0,
                                      r=axis + np.array([0, 0, z]),
                                      v=np.zeros(3))
        probe = PointCharge(q=charge.q, m=charge.m, r=charge.r, v=v_rel)
        return force_on_charge_from_loop(probe, slice_dipole, units)

    return _z_quadrature(integrand, z_cut, tail_extrapolate=tail_extrapolate,
                         feature_z=float(charge.r[2]))


def loop_force_by_wire_quadrature(dipole: MagneticDipole, w: LineCharge,
                                  units: Units, z_cut: float = 400.0,
                                  tail_extrapolate: bool = True) -> np.ndarray:
    """Force on the moment as the z-quadrature over wire charge elements."""
    axis = w.axis_xy
    v_rel = w.v - dipole.v

    def integrand(z):
        element = PointCharge(q=w.lam, m=1.0, r=axis + np.array([0, 0, z]),
                              v=v_rel)
        probe = MagneticDipole(mu=dipole.mu, m=dipole.m, r=dipole.r,
                               v=np.zeros(3))
        return force_on_loop_from_charge(element, probe, units)

    return _z_quadrature(integrand, z_cut, tail_extrapolate=tail_extrapolate,
                         feature_z=float(dipole.r[2]))


def charge_zero_force_quadrature(dipole_or_charge, line, units: Units,
                                 z_cut: float) -> np.ndarray:
    """Cutoff-dependent value of the zero-force quadratures (decays ~1/Z^2).

    For a charge near a flux line, the per-slice field forces; for a
    moment near a wire, the per-element forces on the wire's charges.
    """
    if isinstance(line, LineSolenoid):
        return charge_force_by_slice_quadrature(dipole_or_charge, line, units,
                                                z_cut, tail_extrapolate=False)
    if isinstance(line, LineCharge):
        axis = line.axis_xy
        dipole = dipole_or_charge
        v_rel = line.v - dipole.v

        def integrand(z):
            element = PointCharge(q=line.lam, m=1.0,
                                  r=axis + np.array([0, 0, z]), v=v_rel)
            probe = MagneticDipole(mu=dipole.mu, m=dipole.m, r=dipole.r,
                                   v=np.zeros(3))
            return force_on_charge_from_loop(element, probe, units)

        return _z_quadrature(integrand, z_cut, tail_extrapolate=False,
                             feature_z=float(dipole.r[2]))
    raise TypeError(f"unsupported line source {type(line)!r}")


# ---------------------------------------------------------------------------
# Straight-path impulse and displacement
# ---------------------------------------------------------------------------

@dataclass
class StraightPath:
    """Unaccelerated trajectory r(t) = start + velocity * t.

    Infinite time ranges are supported; the quadrature maps them to a
    finite angle interval about the closest approach to the source.
    """

    start: np.ndarray
    velocity: np.ndarray
    t_min: float = -np.inf
    t_max: float = np.inf

    def __post_init__(self):
        self.start = vec3(self.start)
        self.velocity = vec3(self.velocity)
        if np.linalg.norm(self.velocity) == 0.0:
            raise ValueError("path velocity must be nonzero")
        if not self.t_min < self.t_max:
            raise ValueError("empty time window")

    def position(self, t):
        t = np.asarray(t, dtype=float)
        return self.start + t[..., None] * self.velocity

    def closest_approach(self, reference, in_plane=True):
        """(t_star, b): time and distance of closest approach to a point
        (in-plane distance when the source is a line along z)."""
        ref = vec3(reference)
        d0 = self.start - ref
        v = self.velocity.copy()
        if in_plane:
            d0[2] = 0.0
            v[2] = 0.0
        v2 = v @ v
        if v2 == 0.0:
            raise ValueError("path parallel to the line axis")
        t_star = -(d0 @ v) / v2
        b = float(np.linalg.norm(d0 + t_star * v))
        if b == 0.0:
            raise OnAxisError("path crosses the source axis")
        return float(t_star), b


@dataclass
class ForceField:
    """Force on a tagged target as the probe body travels.

    ``fn(r, v, t)`` returns the instantaneous force vector when the moving
    body is at ``r`` with velocity ``v``; ``reference`` is the source
    location used to center the path quadrature; ``line_source`` selects
    in-plane closest-approach geometry.
    """

    system: str
    target: str
    fn: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    reference: np.ndarray = field(default_factory=lambda: np.zeros(3))
    line_source: bool = True

    def along(self, path: StraightPath) -> Callable[[float], np.ndarray]:
        def f_of_t(t):
            return self.fn(path.position(t), path.velocity, t)
        return f_of_t


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_floor: float = 1e-14
    initial_panels: int = 8
    max_doublings: int = 12
    gauss_order: int = 16
    cutoff_factor: float = 200.0   # finite realization of infinity, in units of b/|v|


def _gauss_panels(fn_vec, a, b, panels, order):
    """Composite Gauss-Legendre of a vector-valued function on [a, b]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    total = np.zeros(3)
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        pts = mid + half * nodes
        vals = np.array([fn_vec(p) for p in pts])
        total += half * weights @ vals
    return total


def _refine(fn_vec, a, b, cfg: QuadratureConfig, scale_floor=0.0):
    panels = cfg.initial_panels
    prev = _gauss_panels(fn_vec, a, b, panels, cfg.gauss_order)
    for _ in range(cfg.max_doublings):
        panels *= 2
        cur = _gauss_panels(fn_vec, a, b, panels, cfg.gauss_order)
        err = float(np.linalg.norm(cur - prev))
        tol = cfg.rel_tol * max(float(np.linalg.norm(cur)), scale_floor) \
            + cfg.abs_floor
        if err <= tol:
            return cur, err
        prev = cur
    raise NonConvergenceError(
        f"quadrature failed to converge: last residual {err:g} > {tol:g}")


def _theta_window(path: StraightPath, t_star, b, cfg: QuadratureConfig,
                  realize_infinity: bool = False):
    """Map the (possibly infinite) time window to the tangent-angle chart
    t = t_star + (b/|v|) tan(theta).

    Infinite limits map to theta = +-pi/2 exactly; the transformed force
    integrand stays finite and smooth there, so no cutoff is needed.  With
    ``realize_infinity`` the limits are instead clamped to
    ``cutoff_factor * b/|v|`` (required when the integrand carries an
    explicit window-end weight, as the displacement does).
    """
    speed = float(np.linalg.norm(path.velocity))
    tau = b / speed
    cut = cfg.cutoff_factor * tau

    def theta_of(t, sign):
        if np.isinf(t):
            if realize_infinity:
                t = t_star + sign * cut
            else:
                return sign * np.pi / 2.0, t
        return np.arctan((t - t_star) / tau), t

    th_lo, t_lo = theta_of(path.t_min, -1.0)
    th_hi, t_hi = theta_of(path.t_max, +1.0)
    return tau, t_lo, t_hi, th_lo, th_hi


def straight_path_impulse(force: ForceField, path: StraightPath,
                          cfg: QuadratureConfig = QuadratureConfig(),
                          scale_floor=0.0):
    """Time integral of the force along the path.

    Returns (impulse, error_estimate).  The tangent substitution about the
    closest approach maps infinite windows to a finite smooth integral (no
    cutoff error); the error estimate comes from panel halving.
    """
    t_star, b = path.closest_approach(force.reference, force.line_source)
    f_of_t = force.along(path)
    tau, _, _, th_lo, th_hi = _theta_window(path, t_star, b, cfg)

    def integrand(theta):
        t = t_star + tau * np.tan(theta)
        return f_of_t(t) * tau / np.cos(theta) ** 2

    return _refine(integrand, th_lo, th_hi, cfg, scale_floor)


def straight_path_partial_impulse(force: ForceField, path: StraightPath,
                                  t_upper: float,
                                  cfg: QuadratureConfig = QuadratureConfig(),
                                  scale_floor=0.0):
    """Impulse accumulated from the window start up to ``t_upper``."""
    clipped = StraightPath(path.start, path.velocity, path.t_min, t_upper)
    return straight_path_impulse(force, clipped, cfg, scale_floor)


def straight_path_displacement(force: ForceField, path: StraightPath, mass,
                               cfg: QuadratureConfig = QuadratureConfig(),
                               scale_floor=0.0):
    """Net position offset (1/m) double-integral of the force.

    Evaluated as (1/m) int (T - t) F(t) dt over the realized window ending
    at T.  When the net impulse vanishes this is the asymptotic offset of
    the kicked body; transverse components can still grow with the cutoff
    (the 1/t impulse tail), which the error estimate will reveal.
    """
    t_star, b = path.closest_approach(force.reference, force.line_source)
    f_of_t = force.along(path)
    tau, _, t_hi, th_lo, th_hi = _theta_window(path, t_star, b, cfg,
                                               realize_infinity=True)

    def integrand(theta):
        t = t_star + tau * np.tan(theta)
        return (t_hi - t) * f_of_t(t) * tau / np.cos(theta) ** 2

    vec, err = _refine(integrand, th_lo, th_hi, cfg, scale_floor)
    return vec / mass, err / mass
