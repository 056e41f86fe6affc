"""Two-point-charge dynamics at order (v/c)^2.

The interaction Lagrangian is

    L_int = -q1 q2 / r + (q1 q2 / 2 r c^2) [v1.v2 + (v1.rhat)(v2.rhat)],

with r = r1 - r2.  Because the generalized momenta contain the other
body's velocity, the Euler-Lagrange equations couple both accelerations
linearly; :func:`darwin_accelerations` assembles and solves that 6x6
system exactly.  The crossed-beam configuration (one charge moving along
x toward another moving along y) has closed-form accelerations that the
solver must reproduce; both are exposed, together with the independent
second-order Lorentz-force expansion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import PointCharge, vec3
from .errors import OutOfRegimeError, SingularSeparationError, SingularSystemError
from .units import Units

__all__ = [
    "TwoBodyState", "AccelPair",
    "darwin_lagrangian", "darwin_accelerations", "euler_lagrange_residual",
    "feynman_state", "feynman_accelerations_closed_form",
    "lorentz_expanded_accelerations",
    "canonical_momenta", "interaction_field_momentum", "darwin_energy",
]


@dataclass
class TwoBodyState:
    body1: PointCharge
    body2: PointCharge
    units: Units
    eps_sing: float = 0.0

    def __post_init__(self):
        d = self.body1.r - self.body2.r
        if np.linalg.norm(d) <= self.eps_sing or np.linalg.norm(d) == 0.0:
            raise SingularSeparationError("coincident charges")
        for b in (self.body1, self.body2):
            if np.linalg.norm(b.v) >= self.units.c:
                raise OutOfRegimeError("body speed >= c")

    def with_state(self, r1, v1, r2, v2) -> "TwoBodyState":
        return TwoBodyState(self.body1.with_state(r1, v1),
                            self.body2.with_state(r2, v2),
                            self.units, self.eps_sing)


@dataclass
class AccelPair:
    a1: np.ndarray
    a2: np.ndarray

    def __post_init__(self):
        self.a1 = vec3(self.a1)
        self.a2 = vec3(self.a2)

    def swapped(self) -> "AccelPair":
        return AccelPair(self.a2.copy(), self.a1.copy())


def _geometry(s: TwoBodyState):
    d = s.body1.r - s.body2.r
    r = float(np.linalg.norm(d))
    return d, r, d / r


def darwin_lagrangian(s: TwoBodyState) -> float:
    """Lagrangian value: kinetic + Coulomb + velocity-velocity coupling."""
    b1, b2 = s.body1, s.body2
    d, r, rhat = _geometry(s)
    c = s.units.c
    kinetic = 0.5 * b1.m * b1.v @ b1.v + 0.5 * b2.m * b2.v @ b2.v
    qq = b1.q * b2.q
    coupling = b1.v @ b2.v + (b1.v @ rhat) * (b2.v @ rhat)
    return kinetic - qq / r + qq * coupling / (2.0 * r * c**2)


def _coupling_block(qq, r, rhat, c):
    """Off-diagonal acceleration block (q1 q2 / 2 c^2 r)[I + rhat rhat^T]."""
    return (qq / (2.0 * c**2 * r)) * (np.eye(3) + np.outer(rhat, rhat))


def _grad_L_r1(s: TwoBodyState):
    """dL/dr1 (equals -dL/dr2)."""
    b1, b2 = s.body1, s.body2
    d, r, _ = _geometry(s)
    c = s.units.c
    qq = b1.q * b2.q
    v1, v2 = b1.v, b2.v
    grad = qq * d / r**3
    grad += (qq / (2.0 * c**2)) * (
        -(v1 @ v2) * d / r**3
        - 3.0 * (v1 @ d) * (v2 @ d) * d / r**5
        + ((v1 @ d) * v2 + (v2 @ d) * v1) / r**3
    )
    return grad


def _convective_dpdt(qq, r, rhat, c, v_other, rdot):
    """Velocity-only part of d/dt of the interaction momentum.

    d/dt { (qq / 2 c^2 r) [v_j + rhat (v_j . rhat)] } with a_j excluded:
    differentiates 1/r and rhat along the relative motion rdot = v1 - v2.
    """
    rmag_dot = rhat @ rdot
    rhat_dot = (rdot - rhat * rmag_dot) / r
    term = (v_other @ rhat_dot) * rhat + (v_other @ rhat) * rhat_dot
    term -= (rmag_dot / r) * (v_other + rhat * (v_other @ rhat))
    return (qq / (2.0 * c**2 * r)) * term


def darwin_accelerations(s: TwoBodyState) -> AccelPair:
    """Solve the coupled Euler-Lagrange equations for both accelerations.

    The 6x6 system is [[m1 I, K], [K, m2 I]] a = F with
    K = (q1 q2 / 2 c^2 r)(I + rhat rhat^T); it becomes singular only for
    q^2/(m c^2 r) near 1, outside the expansion's validity.
    """
    b1, b2 = s.body1, s.body2
    d, r, rhat = _geometry(s)
    c = s.units.c
    qq = b1.q * b2.q
    rdot = b1.v - b2.v

    K = _coupling_block(qq, r, rhat, c)
    grad1 = _grad_L_r1(s)
    f1 = grad1 - _convective_dpdt(qq, r, rhat, c, b2.v, rdot)
    f2 = -grad1 - _convective_dpdt(qq, r, rhat, c, b1.v, rdot)

    mat = np.zeros((6, 6))
    mat[:3, :3] = b1.m * np.eye(3)
    mat[3:, 3:] = b2.m * np.eye(3)
    mat[:3, 3:] = K
    mat[3:, :3] = K
    if np.linalg.cond(mat) > 1e12:
        raise SingularSystemError(
            "acceleration system singular: q^2/(m c^2 r) is near 1, "
            "outside the (v/c)^2 regime")
    sol = np.linalg.solve(mat, np.concatenate([f1, f2]))
    return AccelPair(sol[:3], sol[3:])


def euler_lagrange_residual(s: TwoBodyState, accels: AccelPair) -> tuple[float, float]:
    """Norms of d/dt dL/dv_i - dL/dr_i with the given accelerations."""
    b1, b2 = s.body1, s.body2
    d, r, rhat = _geometry(s)
    c = s.units.c
    qq = b1.q * b2.q
    rdot = b1.v - b2.v
    K = _coupling_block(qq, r, rhat, c)
    grad1 = _grad_L_r1(s)
    res1 = (b1.m * accels.a1 + K @ accels.a2
            + _convective_dpdt(qq, r, rhat, c, b2.v, rdot) - grad1)
    res2 = (b2.m * accels.a2 + K @ accels.a1
            + _convective_dpdt(qq, r, rhat, c, b1.v, rdot) + grad1)
    return float(np.linalg.norm(res1)), float(np.linalg.norm(res2))


def feynman_state(q, m, r, v, units: Units) -> TwoBodyState:
    """Crossed-beam initial data: body1 at origin moving +x, body2 at
    (r, 0, 0) moving +y, equal charges and masses."""
    b1 = PointCharge(q=q, m=m, r=[0.0, 0.0, 0.0], v=[v, 0.0, 0.0])
    b2 = PointCharge(q=q, m=m, r=[r, 0.0, 0.0], v=[0.0, v, 0.0])
    return TwoBodyState(b1, b2, units)


def feynman_accelerations_closed_form(q, m, r, v, c):
    """Exact rational accelerations for the crossed-beam configuration.

    Returns (a1x, a1y, a2x, a2y); all other components vanish.  The
    denominators vanish when x = q^2/(m c^2 r) reaches 1 (resp. 2),
    outside the theory's validity.
    """
    x = q**2 / (m * c**2 * r)
    if x >= 1.0:
        raise OutOfRegimeError(f"q^2/(m c^2 r) = {x:g} >= 1")
    beta2 = (v / c) ** 2
    base = q**2 / (m * r**2)
    den_full = 1.0 - x**2
    den_quarter = 1.0 - 0.25 * x**2
    a1x = -base * ((1.0 + 0.5 * beta2) + x * (1.0 - beta2)) / den_full
    a1y = -base * beta2 / den_quarter
    a2x = base * ((1.0 - beta2) + x * (1.0 + 0.5 * beta2)) / den_full
    a2y = (v**2 / (2.0 * m**2 * r)) * (q**2 / (c**2 * r)) ** 2 / den_quarter
    return a1x, a1y, a2x, a2y


def lorentz_expanded_accelerations(q, m, r, v, c):
    """Second-order Lorentz-force accelerations for the same configuration.

    gamma is evaluated exactly rather than series-expanded; the two routes
    agree up to O((v/c)^4) and O(q^2/(m c^2 r)) terms.
    """
    if not (abs(v) < c):
        raise OutOfRegimeError("v >= c")
    gamma = 1.0 / np.sqrt(1.0 - (v / c) ** 2)
    base = q**2 / (m * r**2)
    a1x = -gamma * base
    a1y = -gamma * base * (v / c) ** 2
    a2x = base / gamma**2
    a2y = 0.0
    return a1x, a1y, a2x, a2y


def canonical_momenta(s: TwoBodyState) -> tuple[np.ndarray, np.ndarray]:
    """Generalized momenta dL/dv_i = m_i v_i + (q_i/c) A_j(r_i)."""
    b1, b2 = s.body1, s.body2
    _, r, rhat = _geometry(s)
    c = s.units.c
    pref = b1.q * b2.q / (2.0 * r * c**2)
    p1 = b1.m * b1.v + pref * (b2.v + rhat * (b2.v @ rhat))
    p2 = b2.m * b2.v + pref * (b1.v + rhat * (b1.v @ rhat))
    return p1, p2


def interaction_field_momentum(s: TwoBodyState) -> np.ndarray:
    """Total canonical minus total mechanical momentum.

    This is the momentum the electromagnetic interaction holds; its time
    derivative balances the change of total mechanical momentum.
    """
    b1, b2 = s.body1, s.body2
    _, r, rhat = _geometry(s)
    c = s.units.c
    vsum = b1.v + b2.v
    return (b1.q * b2.q / (2.0 * r * c**2)) * (vsum + rhat * (vsum @ rhat))


def darwin_energy(s: TwoBodyState) -> float:
    """Conserved energy sum(p_i . v_i) - L."""
    p1, p2 = canonical_momenta(s)
    return float(p1 @ s.body1.v + p2 @ s.body2.v - darwin_lagrangian(s))
