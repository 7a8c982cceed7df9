"""Linear state-space model of the arm about a rest pose.

The state stacks (theta, omega); the input is joint torque. The model is
built about (theta0, omega=0) with the gravity-hold torque as input origin,
so it is a genuine LTI model in error coordinates. The acceleration
Jacobians come from central finite differences of the forward dynamics;
the input block is the exact inertia inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import forward_dynamics, gravity_vector, inertia_matrix
from .model import JointState, ManipulatorParams, TorqueCommand

DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True)
class StateSpaceModel:
    """x_dot = A (x - x0) + B (u - u0), y = C (x - x0); D is zero."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    operating_state: JointState
    operating_torque: TorqueCommand


def equilibrium_torque(p: ManipulatorParams, theta) -> TorqueCommand:
    """Torque holding the arm static at the given pose (gravity only)."""
    return TorqueCommand(tau=gravity_vector(p, theta))


def linearize_about(p: ManipulatorParams, theta0,
                    step: float = DEFAULT_FD_STEP) -> StateSpaceModel:
    """Linearize the forward dynamics about a rest pose.

    ``step`` is the central-difference perturbation, in radians for angle
    columns and rad/s for velocity columns.
    """
    theta0 = np.asarray(theta0, dtype=float).reshape(3)
    tau0 = equilibrium_torque(p, theta0)
    x0 = np.concatenate([theta0, np.zeros(3)])

    def accel(x):
        return forward_dynamics(p, JointState(theta=x[:3], omega=x[3:]), tau0)

    a = np.zeros((6, 6))
    a[:3, 3:] = np.eye(3)
    for j in range(6):
        xp, xm = x0.copy(), x0.copy()
        xp[j] += step
        xm[j] -= step
        a[3:, j] = (accel(xp) - accel(xm)) / (2.0 * step)

    b = np.zeros((6, 3))
    b[3:, :] = np.linalg.inv(inertia_matrix(p, theta0))

    c = np.zeros((3, 6))
    c[:, :3] = np.eye(3)

    return StateSpaceModel(
        A=a, B=b, C=c, D=np.zeros((3, 3)),
        operating_state=JointState.at_rest(theta0),
        operating_torque=tau0,
    )
