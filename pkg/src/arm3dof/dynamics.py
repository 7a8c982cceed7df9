"""Closed-form rigid-body dynamics of the arm: tau = M(theta)*thetadd + V(theta, omega) + G(theta).

The entries follow the slender-rod closed-form derivation for this arm.
Two coefficient sets are available for the single elbow-wrist inertia
coupling entry M23 (see ``inertia_matrix``); everything else is common.

An independent numeric cross-check built from the rod energies is provided
by ``energy_based_terms`` for diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularInertia
from .model import JointState, ManipulatorParams, TorqueCommand

COUPLING_CONSISTENT = "consistent"
COUPLING_PRINTED = "printed"

# Condition number above which the inertia matrix is treated as singular.
_COND_LIMIT = 1e12


@dataclass(frozen=True)
class DynamicsTerms:
    """M, V, G evaluated at one state."""

    M: np.ndarray
    V: np.ndarray
    G: np.ndarray


def inertia_matrix(p: ManipulatorParams, theta,
                   coupling: str = COUPLING_CONSISTENT) -> np.ndarray:
    """Configuration-dependent 3x3 inertia matrix.

    ``coupling`` selects the M23 entry. The default "consistent" value
    (1/3*a3^2*m3 + 1/2*a2*a3*m3*cos(theta3)) is the slender-rod result and
    keeps the matrix positive definite. The "printed" value
    (1/3*a3^2*m3 + a2^2*m3 + 1/3*a2*a3*m3*cos(theta3)) preserves the source
    derivation's coefficients verbatim for transcription checks; it renders
    the matrix indefinite and is not used by the simulator.
    """
    _, t2, t3 = np.asarray(theta, dtype=float).reshape(3)
    c2 = math.cos(t2)
    c23 = math.cos(t2 + t3)
    c3 = math.cos(t3)
    m11 = (0.5 * p.m1 * p.a1 ** 2 + 0.5 * p.m1 * p.a2 ** 2
           + p.m3 * (p.a2 ** 2 * c2 ** 2 + (p.a3 ** 2 / 3.0) * c23 ** 2
                     + p.a2 * p.a3 * c23 * c2)
           + (p.m2 * p.a2 ** 2 / 3.0) * c2 ** 2)
    m22 = (p.a2 ** 2 * p.m2 / 3.0 + p.a2 ** 2 * p.m3 + p.a3 ** 2 * p.m3 / 3.0
           + p.a2 * p.a3 * p.m3 * c3)
    if coupling == COUPLING_CONSISTENT:
        m23 = p.a3 ** 2 * p.m3 / 3.0 + 0.5 * p.a2 * p.a3 * p.m3 * c3
    elif coupling == COUPLING_PRINTED:
        m23 = p.a3 ** 2 * p.m3 / 3.0 + p.a2 ** 2 * p.m3 + p.a2 * p.a3 * p.m3 * c3 / 3.0
    else:
        raise ValueError(f"unknown coupling mode {coupling!r}")
    m33 = p.m3 * p.a3 ** 2 / 3.0
    return np.array([
        [m11, 0.0, 0.0],
        [0.0, m22, m23],
        [0.0, m23, m33],
    ])


def velocity_vector(p: ManipulatorParams, theta, omega) -> np.ndarray:
    """Coriolis and centrifugal torques; every term carries a velocity product."""
    _, t2, t3 = np.asarray(theta, dtype=float).reshape(3)
    d1, d2, d3 = np.asarray(omega, dtype=float).reshape(3)
    s2t2 = math.sin(2.0 * t2)
    s2t23 = math.sin(2.0 * (t2 + t3))
    s2t2t3 = math.sin(2.0 * t2 + t3)
    c2 = math.cos(t2)
    s23 = math.sin(t2 + t3)
    s3 = math.sin(t3)
    v1 = ((-(4.0 / 3.0) * p.m2 * p.a2 ** 2 * s2t2
           - (p.m3 * p.a3 ** 2 / 3.0) * s2t23
           - p.m3 * p.a2 * p.a3 * s2t2t3) * d1 * d2
          + (-(p.m3 * p.a3 ** 2 / 3.0) * s2t23
             - p.m3 * p.a2 * p.a3 * c2 * s23) * d1 * d3)
    v2 = ((-p.m3 * p.a2 * p.a3 * s3) * d2 * d3
          + (-0.5 * p.m3 * p.a2 * p.a3 * s3) * d3 ** 2
          + ((p.m2 * p.a2 ** 2 / 6.0) * s2t2
             + (p.m3 * p.a3 ** 2 / 6.0) * s2t23
             + 0.5 * p.m3 * p.a2 ** 2 * s2t2
             + 0.5 * p.m3 * p.a2 * p.a3 * s2t2t3) * d1 ** 2)
    v3 = (0.5 * p.m3 * p.a2 * p.a3 * s3 * d2 ** 2
          + ((p.m3 * p.a3 ** 2 / 6.0) * s2t23
             + 0.5 * p.m3 * p.a2 * p.a3 * c2 * s23) * d1 ** 2)
    return np.array([v1, v2, v3])


def gravity_vector(p: ManipulatorParams, theta) -> np.ndarray:
    """Static torques holding the pose; independent of theta1."""
    _, t2, t3 = np.asarray(theta, dtype=float).reshape(3)
    c2 = math.cos(t2)
    c23 = math.cos(t2 + t3)
    g2 = (0.5 * p.m3 * p.g * p.a3 * c23
          + 0.5 * p.m2 * p.g * p.a2 * c2
          + p.m3 * p.g * p.a2 * c2)
    g3 = 0.5 * p.m3 * p.g * p.a3 * c23
    return np.array([0.0, g2, g3])


def dynamics_terms(p: ManipulatorParams, state: JointState,
                   coupling: str = COUPLING_CONSISTENT) -> DynamicsTerms:
    return DynamicsTerms(
        M=inertia_matrix(p, state.theta, coupling=coupling),
        V=velocity_vector(p, state.theta, state.omega),
        G=gravity_vector(p, state.theta),
    )


def inverse_dynamics(p: ManipulatorParams, state: JointState, accel) -> TorqueCommand:
    """Torque producing a desired joint acceleration at the given state."""
    accel = np.asarray(accel, dtype=float).reshape(3)
    m = inertia_matrix(p, state.theta)
    tau = m @ accel + velocity_vector(p, state.theta, state.omega) + gravity_vector(p, state.theta)
    return TorqueCommand(tau=tau)


def _solve_inertia(m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # M is block diagonal: scalar (1,1) entry plus a symmetric 2x2 block.
    m11 = m[0, 0]
    a, b, d = m[1, 1], m[1, 2], m[2, 2]
    det = a * d - b * b
    # Singular values of the symmetric blocks are |eigenvalues|.
    half_tr = 0.5 * (a + d)
    disc = math.sqrt(max(half_tr * half_tr - det, 0.0))
    svals = (abs(m11), abs(half_tr + disc), abs(half_tr - disc))
    if min(svals) == 0.0 or max(svals) / min(svals) >= _COND_LIMIT:
        raise SingularInertia(
            f"inertia matrix condition number exceeds {_COND_LIMIT:g} at this configuration"
        )
    acc1 = rhs[0] / m11
    acc2 = (d * rhs[1] - b * rhs[2]) / det
    acc3 = (a * rhs[2] - b * rhs[1]) / det
    return np.array([acc1, acc2, acc3])


def forward_dynamics(p: ManipulatorParams, state: JointState, tau: TorqueCommand) -> np.ndarray:
    """Joint acceleration under the given torque."""
    rhs = tau.tau - velocity_vector(p, state.theta, state.omega) - gravity_vector(p, state.theta)
    return _solve_inertia(inertia_matrix(p, state.theta), rhs)


def _link_endpoints(p: ManipulatorParams, theta):
    t1, t2, t3 = theta
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    c23, s23 = math.cos(t2 + t3), math.sin(t2 + t3)
    p0 = np.zeros(3)
    p1 = np.array([0.0, 0.0, p.a1])
    p2 = np.array([p.a2 * c1 * c2, p.a2 * s1 * c2, p.a2 * s2 + p.a1])
    planar = p.a3 * c23 + p.a2 * c2
    p3 = np.array([c1 * planar, s1 * planar, p.a3 * s23 + p.a2 * s2 + p.a1])
    return [(p0, p1, p.m1), (p1, p2, p.m2), (p2, p3, p.m3)]


def _rod_energies(p: ManipulatorParams, theta, omega, h: float = 1e-6):
    """Kinetic and potential energy of three uniform rods, numerically.

    Endpoint velocities come from a central-difference position Jacobian;
    the kinetic energy of a uniform rod with endpoint velocities va, vb is
    m/6 * (va.va + va.vb + vb.vb).
    """
    theta = np.asarray(theta, dtype=float).reshape(3)
    omega = np.asarray(omega, dtype=float).reshape(3)

    def endpoint_positions(th):
        return np.concatenate([np.concatenate(seg[:2]) for seg in _link_endpoints(p, th)])

    jac = np.zeros((18, 3))
    for j in range(3):
        tp, tm = theta.copy(), theta.copy()
        tp[j] += h
        tm[j] -= h
        jac[:, j] = (endpoint_positions(tp) - endpoint_positions(tm)) / (2.0 * h)
    vel = (jac @ omega).reshape(3, 2, 3)

    kinetic = 0.0
    potential = 0.0
    for i, (pa, pb, mass) in enumerate(_link_endpoints(p, theta)):
        va, vb = vel[i]
        kinetic += mass / 6.0 * (va @ va + va @ vb + vb @ vb)
        potential += mass * p.g * 0.5 * (pa[2] + pb[2])
    return kinetic, potential


def energy_based_terms(p: ManipulatorParams, theta, omega,
                       h: float = 1e-5) -> DynamicsTerms:
    """Derive M, V, G numerically from the rod energies (diagnostic).

    Independent of the closed-form entries above: M comes from the kinetic
    energy quadratic form, G from finite differences of the potential, and
    V from the Christoffel symbols of finite-differenced M entries.
    """
    theta = np.asarray(theta, dtype=float).reshape(3)
    omega = np.asarray(omega, dtype=float).reshape(3)

    def mass_matrix(th):
        m = np.zeros((3, 3))
        basis = np.eye(3)
        k_single = [_rod_energies(p, th, basis[i])[0] for i in range(3)]
        for i in range(3):
            m[i, i] = 2.0 * k_single[i]
            for j in range(i + 1, 3):
                k_pair, _ = _rod_energies(p, th, basis[i] + basis[j])
                m[i, j] = m[j, i] = k_pair - k_single[i] - k_single[j]
        return m

    m0 = mass_matrix(theta)

    dm = np.zeros((3, 3, 3))  # dm[k] = dM/dtheta_k
    grav = np.zeros(3)
    for k in range(3):
        tp, tm = theta.copy(), theta.copy()
        tp[k] += h
        tm[k] -= h
        dm[k] = (mass_matrix(tp) - mass_matrix(tm)) / (2.0 * h)
        grav[k] = (_rod_energies(p, tp, omega)[1] - _rod_energies(p, tm, omega)[1]) / (2.0 * h)

    vel = np.zeros(3)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                christoffel = dm[k][i, j] - 0.5 * dm[i][j, k]
                vel[i] += christoffel * omega[j] * omega[k]

    return DynamicsTerms(M=m0, V=vel, G=grav)
