"""3-DoF articulated arm: kinematics, dynamics, LQR/PID control, simulation."""

from .control import (LqrGain, LqrWeights, PidGains, default_lqr_weights,
                      lqr_control, lqr_gain, pid_control, quadratic_cost,
                      solve_are, solve_lyapunov)
from .dynamics import (COUPLING_CONSISTENT, COUPLING_PRINTED, DynamicsTerms,
                       dynamics_terms, energy_based_terms, forward_dynamics,
                       gravity_vector, inertia_matrix, inverse_dynamics,
                       velocity_vector)
from .errors import (Arm3DofError, ControllerSynthesisFailed, MassMismatch,
                     NonPositiveDimension, NoStabilizingSolution,
                     SingularInertia, SingularTarget, Unreachable,
                     ValidationError)
from .kinematics import (DhRow, Point3, Transform, chain_transform, dh_table,
                         dh_transform, end_effector, forward_kinematics,
                         inverse_kinematics)
from .linearize import StateSpaceModel, equilibrium_torque, linearize_about
from .model import (JointState, ManipulatorParams, TorqueCommand,
                    default_params, validate_params)
from .sim import (Controller, ResponseMetrics, SimConfig, SimResult,
                  compute_metrics, default_pid_gains, rk4_step, simulate)

__version__ = "0.1.0"

__all__ = [
    "Arm3DofError", "ValidationError", "NonPositiveDimension", "MassMismatch",
    "Unreachable", "SingularTarget", "SingularInertia",
    "NoStabilizingSolution", "ControllerSynthesisFailed",
    "ManipulatorParams", "JointState", "TorqueCommand", "default_params",
    "validate_params",
    "DhRow", "Transform", "Point3", "dh_table", "dh_transform",
    "chain_transform", "forward_kinematics", "end_effector",
    "inverse_kinematics",
    "DynamicsTerms", "inertia_matrix", "velocity_vector", "gravity_vector",
    "dynamics_terms", "inverse_dynamics", "forward_dynamics",
    "energy_based_terms", "COUPLING_CONSISTENT", "COUPLING_PRINTED",
    "StateSpaceModel", "equilibrium_torque", "linearize_about",
    "LqrWeights", "LqrGain", "PidGains", "default_lqr_weights",
    "solve_lyapunov", "solve_are", "lqr_gain", "lqr_control", "pid_control",
    "quadratic_cost",
    "Controller", "SimConfig", "SimResult", "ResponseMetrics",
    "default_pid_gains", "rk4_step", "simulate", "compute_metrics",
]
