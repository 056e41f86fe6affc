"""Constrained-description dynamics.

Here extended sources translate rigidly: the interaction Lagrangian is
integrated over the source's constituents first, and the Euler-Lagrange
derivatives are taken with respect to the body coordinate.  Closed-form
equations of motion are provided for the charge/moment pair, exact zeros
for both line-source systems, and a finite-difference Euler-Lagrange
assembler serves as the independent route for all of them.  The
Hamiltonian and hidden-momentum formulations of the moment/wire system
live here too, since both reduce to the same constrained flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bodies import LineCharge, LineSolenoid, MagneticDipole, PointCharge, vec3
from .errors import OnAxisError, SingularSeparationError, SingularSystemError, \
    StepSizeError
from .fields import solenoid_vector_potential, wire_electric_field
from .units import Units

__all__ = [
    "LagrangianSystem", "StepConfig", "numeric_euler_lagrange",
    "ms_lagrangian", "ms_accelerations",
    "ab_lagrangian", "ab_accelerations", "ab_lagrangian_system",
    "ac_lagrangian", "ac_accelerations", "ac_lagrangian_system",
    "ms_lagrangian_system", "darwin_lagrangian_system",
    "ac_hamiltonian", "hamilton_accelerations", "hamilton_accelerations_fd",
    "hidden_momentum_accelerations", "wire_field_jacobian", "legendre_check",
]


# ---------------------------------------------------------------------------
# Charge + moment (the building-block pair)
# ---------------------------------------------------------------------------

def _pair_geometry(charge: PointCharge, dipole: MagneticDipole, eps_sing):
    d = dipole.r - charge.r
    dmag = float(np.linalg.norm(d))
    if dmag <= eps_sing or dmag == 0.0:
        raise SingularSeparationError("charge coincides with the moment")
    return d, dmag


def ms_lagrangian(charge: PointCharge, dipole: MagneticDipole, units: Units,
                  route: str = "field-coupling", eps_sing=0.0) -> float:
    """Rigid charge/moment Lagrangian; two equivalent constructions.

    ``field-coupling``: couple mu to the charge's magnetic field and the
    motional electric dipole to the charge's Coulomb field.
    ``potentials``: couple the charge to the moment's vector and motional
    scalar potentials.  Both reduce to
    (q/c) (v_mu - v_q) . [mu x (r_mu - r_q)] / |r_mu - r_q|^3.
    """
    d, dmag = _pair_geometry(charge, dipole, eps_sing)
    c = units.c
    q, mu = charge.q, dipole.mu
    kinetic = 0.5 * charge.m * charge.v @ charge.v \
        + 0.5 * dipole.m * dipole.v @ dipole.v
    if route == "field-coupling":
        interaction = (q / c) * (mu @ np.cross(charge.v, d)) / dmag**3
        interaction += (q / c) * (np.cross(dipole.v, mu) @ d) / dmag**3
    elif route == "potentials":
        a_mu = np.cross(mu, -d) / dmag**3          # moment's potential at the charge
        interaction = (q / c) * (charge.v @ a_mu)
        interaction -= (q / c) * (dipole.v @ a_mu)  # motional scalar potential
    else:
        raise ValueError(f"unknown route {route!r}")
    return kinetic + interaction


def ms_accelerations(charge: PointCharge, dipole: MagneticDipole,
                     units: Units, eps_sing=0.0) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form constrained accelerations (a_q, a_mu).

    The pair is an exact action-reaction couple:
    m_mu a_mu = -(q/c) { w x mu / d^3 + 3 (d.mu)(d x w) / d^5 } with
    w = v_mu - v_q and d = r_mu - r_q, and m_q a_q is its negative.
    """
    d, dmag = _pair_geometry(charge, dipole, eps_sing)
    w = dipole.v - charge.v
    mu = dipole.mu
    brace = np.cross(w, mu) / dmag**3 \
        + 3.0 * (d @ mu) * np.cross(d, w) / dmag**5
    f_mu = -(charge.q / units.c) * brace
    return -f_mu / charge.m, f_mu / dipole.m


# ---------------------------------------------------------------------------
# Generic finite-difference Euler-Lagrange assembly
# ---------------------------------------------------------------------------

@dataclass
class LagrangianSystem:
    """Evaluable Lagrangian over flat generalized coordinates.

    ``lagrangian(r, v)`` takes two equal-length 1-D arrays.  ``labels``
    name the coordinates; ``length_scale``/``velocity_scale`` set the
    finite-difference steps.
    """

    lagrangian: Callable[[np.ndarray, np.ndarray], float]
    labels: Sequence[str]
    length_scale: float = 1.0
    velocity_scale: float = 1.0

    @property
    def ndof(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class StepConfig:
    """Finite-difference controls.

    ``h_rel`` multiplies the system's characteristic scales.  The default
    1e-3 balances truncation against roundoff in the second derivatives
    (1e-5 would push second-difference roundoff to ~1e-6 relative, far too
    noisy for the zero-force assertions).  One Richardson level (h, h/2)
    removes the leading O(h^2) truncation.
    """

    h_rel: float = 1e-3
    richardson: bool = True
    consistency_tol: float | None = None   # max |a(h) - a(h/2)| allowed, absolute


def _el_solve(L, r, v, h_r, h_v):
    n = r.size
    M = np.empty((n, n))
    C = np.empty((n, n))
    g = np.empty(n)

    def dv(i, s):
        out = v.copy()
        out[i] += s
        return out

    def dr(i, s):
        out = r.copy()
        out[i] += s
        return out

    L0 = L(r, v)
    for i in range(n):
        g[i] = (L(dr(i, h_r), v) - L(dr(i, -h_r), v)) / (2 * h_r)
        M[i, i] = (L(r, dv(i, h_v)) - 2 * L0 + L(r, dv(i, -h_v))) / h_v**2
    for i in range(n):
        for j in range(i + 1, n):
            vpp = v.copy(); vpp[i] += h_v; vpp[j] += h_v
            vpm = v.copy(); vpm[i] += h_v; vpm[j] -= h_v
            vmp = v.copy(); vmp[i] -= h_v; vmp[j] += h_v
            vmm = v.copy(); vmm[i] -= h_v; vmm[j] -= h_v
            M[i, j] = M[j, i] = (L(r, vpp) - L(r, vpm) - L(r, vmp) + L(r, vmm)) \
                / (4 * h_v**2)
    for i in range(n):
        for j in range(n):
            C[i, j] = (L(dr(j, h_r), dv(i, h_v)) - L(dr(j, h_r), dv(i, -h_v))
                       - L(dr(j, -h_r), dv(i, h_v)) + L(dr(j, -h_r), dv(i, -h_v))) \
                / (4 * h_r * h_v)
    if np.linalg.cond(M) > 1e10:
        raise SingularSystemError("finite-difference mass matrix is singular")
    return np.linalg.solve(M, g - C @ v)


def numeric_euler_lagrange(system: LagrangianSystem, r, v,
                           cfg: StepConfig = StepConfig()) -> np.ndarray:
    """Generalized accelerations from finite-differenced Euler-Lagrange
    equations: solve d2L/dvdv a = dL/dr - d2L/dvdr v."""
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    if r.size != system.ndof or v.size != system.ndof:
        raise ValueError("state size does not match the system's coordinates")
    h_r = cfg.h_rel * system.length_scale
    h_v = cfg.h_rel * system.velocity_scale
    a_h = _el_solve(system.lagrangian, r, v, h_r, h_v)
    if not cfg.richardson:
        return a_h
    a_h2 = _el_solve(system.lagrangian, r, v, h_r / 2, h_v / 2)
    if cfg.consistency_tol is not None:
        gap = float(np.max(np.abs(a_h - a_h2)))
        if gap > cfg.consistency_tol:
            raise StepSizeError(
                f"step estimates disagree by {gap:g} > {cfg.consistency_tol:g}")
    return (4.0 * a_h2 - a_h) / 3.0


# Prebuilt Lagrangian systems for the cross-checks -------------------------

def ms_lagrangian_system(charge: PointCharge, dipole: MagneticDipole,
                         units: Units, length_scale=1.0,
                         velocity_scale=1.0) -> LagrangianSystem:
    # inline float math: the finite-difference assembler calls this tens of
    # thousands of times per state grid
    q, m_q, m_mu, c = charge.q, charge.m, dipole.m, units.c
    mux, muy, muz = dipole.mu

    def L(r, v):
        dx, dy, dz = r[3] - r[0], r[4] - r[1], r[5] - r[2]
        d3 = (dx * dx + dy * dy + dz * dz) ** 1.5
        wx, wy, wz = v[3] - v[0], v[4] - v[1], v[5] - v[2]
        cross_x = muy * dz - muz * dy
        cross_y = muz * dx - mux * dz
        cross_z = mux * dy - muy * dx
        kinetic = 0.5 * m_q * (v[0]**2 + v[1]**2 + v[2]**2) \
            + 0.5 * m_mu * (v[3]**2 + v[4]**2 + v[5]**2)
        return kinetic + (q / c) * (wx * cross_x + wy * cross_y + wz * cross_z) / d3

    labels = [f"q_{ax}" for ax in "xyz"] + [f"mu_{ax}" for ax in "xyz"]
    return LagrangianSystem(L, labels, length_scale, velocity_scale)


def darwin_lagrangian_system(state, length_scale=1.0,
                             velocity_scale=1.0) -> LagrangianSystem:
    from .darwin import darwin_lagrangian

    def L(r, v):
        s = state.with_state(r[:3], v[:3], r[3:], v[3:])
        return darwin_lagrangian(s)
    labels = [f"b1_{ax}" for ax in "xyz"] + [f"b2_{ax}" for ax in "xyz"]
    return LagrangianSystem(L, labels, length_scale, velocity_scale)


# ---------------------------------------------------------------------------
# Charge + flux line
# ---------------------------------------------------------------------------

def _check_off_axis(point_xy, axis_xy, eps_sing, what):
    rho = np.asarray(point_xy, dtype=float) - np.asarray(axis_xy, dtype=float)
    if np.linalg.norm(rho) <= eps_sing or np.linalg.norm(rho) == 0.0:
        raise OnAxisError(f"body on the {what} axis")


def ab_lagrangian(charge: PointCharge, s: LineSolenoid, units: Units,
                  effective_length: float = 1.0, eps_sing=0.0) -> float:
    """Charge/flux-line Lagrangian: kinetic + (q/c)(v_q - v_s) . A_s.

    The flux line is a rigid 2-DOF body of mass mass_per_length *
    effective_length.  The interaction is the relative-velocity coupling
    to the exterior vector potential, which is curl-free off the axis, so
    the Euler-Lagrange equations give zero force on both bodies.
    """
    _check_off_axis(charge.r[:2], s.axis_point, eps_sing, "solenoid")
    m_s = s.mass_per_length * effective_length
    a_s = solenoid_vector_potential(s, charge.r, eps_sing)
    kinetic = 0.5 * charge.m * charge.v @ charge.v + 0.5 * m_s * s.v @ s.v
    return kinetic + (charge.q / units.c) * ((charge.v - s.v) @ a_s)


def ab_accelerations(charge: PointCharge, s: LineSolenoid, units: Units,
                     eps_sing=0.0) -> tuple[np.ndarray, np.ndarray]:
    """Exact zeros: the interaction term is a total time derivative in the
    curl-free exterior."""
    _check_off_axis(charge.r[:2], s.axis_point, eps_sing, "solenoid")
    return np.zeros(3), np.zeros(3)


def ab_lagrangian_system(charge: PointCharge, s: LineSolenoid, units: Units,
                         effective_length: float = 1.0, length_scale=1.0,
                         velocity_scale=1.0) -> LagrangianSystem:
    """5-DOF system (charge xyz + line xy) for the finite-difference route."""
    q, m_q, c = charge.q, charge.m, units.c
    m_s = s.mass_per_length * effective_length
    pref = s.flux / (2.0 * np.pi)

    def L(r, v):
        dx, dy = r[0] - r[3], r[1] - r[4]
        rho2 = dx * dx + dy * dy
        ax = -pref * dy / rho2
        ay = pref * dx / rho2
        kinetic = 0.5 * m_q * (v[0]**2 + v[1]**2 + v[2]**2) \
            + 0.5 * m_s * (v[3]**2 + v[4]**2)
        return kinetic + (q / c) * ((v[0] - v[3]) * ax + (v[1] - v[4]) * ay)

    labels = ["q_x", "q_y", "q_z", "s_x", "s_y"]
    return LagrangianSystem(L, labels, length_scale, velocity_scale)


# ---------------------------------------------------------------------------
# Moment + charged wire
# ---------------------------------------------------------------------------

def ac_lagrangian(dipole: MagneticDipole, w: LineCharge, units: Units,
                  effective_length: float = 1.0, eps_sing=0.0) -> float:
    """Moment/wire Lagrangian:
    kinetic + (2 lambda / c)(v_w - v_mu) . [mu x d] / rho^2,
    with d the in-plane separation (wire minus moment).

    Equivalently (1/c)(v_mu - v_w) . (mu x E_wire); the two agree
    identically because only the in-plane separation is defined for an
    infinite line.
    """
    _check_off_axis(dipole.r[:2], w.axis_point, eps_sing, "wire")
    m_w = w.mass_per_length * effective_length
    d = np.array([w.axis_point[0] - dipole.r[0],
                  w.axis_point[1] - dipole.r[1], 0.0])
    rho2 = d @ d
    kinetic = 0.5 * dipole.m * dipole.v @ dipole.v + 0.5 * m_w * w.v @ w.v
    interaction = (2.0 * w.lam / units.c) \
        * ((w.v - dipole.v) @ np.cross(dipole.mu, d)) / rho2
    return kinetic + interaction


def ac_accelerations(dipole: MagneticDipole, w: LineCharge, units: Units,
                     eps_sing=0.0) -> tuple[np.ndarray, np.ndarray]:
    """Exact zeros for a moment along the wire axis."""
    mu = dipole.mu
    if np.linalg.norm(mu[:2]) > 1e-12 * max(np.linalg.norm(mu), 1e-300):
        raise ValueError("zero-force result requires the moment along z")
    _check_off_axis(dipole.r[:2], w.axis_point, eps_sing, "wire")
    return np.zeros(3), np.zeros(3)


def ac_lagrangian_system(dipole: MagneticDipole, w: LineCharge, units: Units,
                         effective_length: float = 1.0, length_scale=1.0,
                         velocity_scale=1.0) -> LagrangianSystem:
    """5-DOF system (moment xyz + wire xy) for the finite-difference route."""
    m_mu, c, lam = dipole.m, units.c, w.lam
    m_w = w.mass_per_length * effective_length
    mux, muy, muz = dipole.mu

    def L(r, v):
        dx, dy = r[3] - r[0], r[4] - r[1]   # in-plane wire minus moment
        rho2 = dx * dx + dy * dy
        cross_x = -muz * dy
        cross_y = muz * dx
        cross_z = mux * dy - muy * dx
        wx, wy, wz = v[3] - v[0], v[4] - v[1], -v[2]
        kinetic = 0.5 * m_mu * (v[0]**2 + v[1]**2 + v[2]**2) \
            + 0.5 * m_w * (v[3]**2 + v[4]**2)
        return kinetic + (2.0 * lam / c) \
            * (wx * cross_x + wy * cross_y + wz * cross_z) / rho2

    labels = ["mu_x", "mu_y", "mu_z", "w_x", "w_y"]
    return LagrangianSystem(L, labels, length_scale, velocity_scale)


# ---------------------------------------------------------------------------
# Hamiltonian and hidden-momentum formulations (moment + stationary wire)
# ---------------------------------------------------------------------------

def wire_field_jacobian(w: LineCharge, r) -> np.ndarray:
    """Analytic Jacobian dE_i/dx_j of the wire field at r (z row/col zero)."""
    r = vec3(r)
    rho = r[:2] - np.asarray(w.axis_point)
    rho2 = float(rho @ rho)
    if rho2 == 0.0:
        raise OnAxisError("on the wire axis")
    jac = np.zeros((3, 3))
    block = (2.0 * w.lam) * (np.eye(2) / rho2 - 2.0 * np.outer(rho, rho) / rho2**2)
    jac[:2, :2] = block
    return jac


def _field_jacobian_fd(e_field, r, h=1e-6):
    r = vec3(r)
    jac = np.empty((3, 3))
    for j in range(3):
        step = np.zeros(3)
        step[j] = h
        jac[:, j] = (np.asarray(e_field(r + step)) - np.asarray(e_field(r - step))) \
            / (2 * h)
    return jac


def _resolve_field(field_or_wire, jacobian):
    if isinstance(field_or_wire, LineCharge):
        wire = field_or_wire
        return (lambda r: wire_electric_field(wire, r),
                lambda r: wire_field_jacobian(wire, r))
    e_field = field_or_wire
    if jacobian is None:
        return e_field, lambda r: _field_jacobian_fd(e_field, r)
    return e_field, jacobian


def ac_hamiltonian(p, r, mu, field_or_wire, m, units: Units,
                   jacobian=None) -> float:
    """Single-particle Hamiltonian p^2/2m - (1/mc) mu . (E x p)."""
    p, r, mu = vec3(p), vec3(r), vec3(mu)
    e_field, _ = _resolve_field(field_or_wire, jacobian)
    e = np.asarray(e_field(r))
    return float(p @ p) / (2 * m) - (mu @ np.cross(e, p)) / (m * units.c)


def hamilton_accelerations(r, v, mu, m, units: Units, field_or_wire,
                           jacobian=None) -> np.ndarray:
    """Acceleration of the Hamilton flow: -(1/mc) (mu . grad)(v x E).

    Exact for divergence-free E up to the (mu x E)^2/c^2 term the
    Hamiltonian itself drops.  Zero whenever E has no variation along mu
    (the moment-along-the-line geometry).
    """
    r, v, mu = vec3(r), vec3(v), vec3(mu)
    _, jac_fn = _resolve_field(field_or_wire, jacobian)
    jac = np.asarray(jac_fn(r))
    dE_along_mu = jac @ mu
    return -np.cross(v, dE_along_mu) / (m * units.c)


def hamilton_accelerations_fd(hamiltonian, p, r, h=1e-3) -> np.ndarray:
    """Acceleration of an arbitrary H(p, r) by finite-differenced Hamilton
    equations: a_i = d2H/dp_i dr_j rdot_j + d2H/dp_i dp_j pdot_j.

    The nested first differences amplify roundoff as eps/h^2, so the
    default step is deliberately coarse.
    """
    p = vec3(p)
    r = vec3(r)

    def dH_dp(pp, rr):
        out = np.empty(3)
        for i in range(3):
            s = np.zeros(3)
            s[i] = h
            out[i] = (hamiltonian(pp + s, rr) - hamiltonian(pp - s, rr)) / (2 * h)
        return out

    def dH_dr(pp, rr):
        out = np.empty(3)
        for i in range(3):
            s = np.zeros(3)
            s[i] = h
            out[i] = (hamiltonian(pp, rr + s) - hamiltonian(pp, rr - s)) / (2 * h)
        return out

    rdot = dH_dp(p, r)
    pdot = -dH_dr(p, r)
    acc = np.zeros(3)
    for j in range(3):
        s = np.zeros(3)
        s[j] = h
        acc += (dH_dp(p, r + s) - dH_dp(p, r - s)) / (2 * h) * rdot[j]
        acc += (dH_dp(p + s, r) - dH_dp(p - s, r)) / (2 * h) * pdot[j]
    return acc


def hidden_momentum_accelerations(dipole: MagneticDipole, field_or_wire,
                                  units: Units, jacobian=None) -> np.ndarray:
    """Equation of motion with the internal-motion momentum subtracted:

        m a = grad(mu . B_motional) - (1/c) d/dt (mu x E),

    with B_motional = -(v x E)/c the field seen by the moving moment.  For
    divergence-free E the two terms collapse to -(1/c)(mu . grad)(v x E),
    matching the Hamilton flow; both terms are kept explicit here so the
    cancellation is exercised rather than assumed.
    """
    r, v, mu = dipole.r, dipole.v, dipole.mu
    _, jac_fn = _resolve_field(field_or_wire, jacobian)
    jac = np.asarray(jac_fn(r))
    c = units.c
    # grad[-(1/c) mu . (v x E)]: component k is -(1/c) (mu x v) . dE/dx_k
    grad_term = -(np.cross(mu, v) @ jac) / c
    # -(1/c)(v . grad)(mu x E) = -(1/c) mu x (J v)
    convective = -np.cross(mu, jac @ v) / c
    return (grad_term + convective) / dipole.m


def legendre_check(dipole: MagneticDipole, w: LineCharge, units: Units) -> dict:
    """Legendre-transform audit for the moment in a stationary wire's field.

    Verifies p = m v + (mu x E)/c, the exact H = |p - mu x E / c|^2 / 2m
    against p.v - L, and reports the size of the (mu x E)^2 term the
    quadratic-form expansion drops.
    """
    e = wire_electric_field(w, dipole.r)
    mu_x_e = np.cross(dipole.mu, e)
    m, v, c = dipole.m, dipole.v, units.c
    p = m * v + mu_x_e / c
    lagrangian = 0.5 * m * v @ v + (v @ mu_x_e) / c
    h_exact = float((p - mu_x_e / c) @ (p - mu_x_e / c)) / (2 * m)
    h_from_legendre = float(p @ v) - lagrangian
    h_approx = float(p @ p) / (2 * m) - float(p @ mu_x_e) / (m * c)
    dropped = float(mu_x_e @ mu_x_e) / (2 * m * c**2)
    return {
        "canonical_momentum": p,
        "h_exact": h_exact,
        "h_from_legendre": h_from_legendre,
        "h_approx": h_approx,
        "dropped_term": dropped,
        "exact_mismatch": abs(h_exact - h_from_legendre),
        "approx_mismatch": abs(h_exact - (h_approx + dropped)),
    }
