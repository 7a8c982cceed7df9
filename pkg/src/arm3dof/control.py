"""Optimal full-state-feedback synthesis and the per-joint PID baseline.

The continuous algebraic Riccati equation

    A' S + S A - S B R^-1 B' S + Q = 0

is solved by Newton-Kleinman iteration: each step solves a Lyapunov
equation for the current stabilizing gain and converges quadratically.
The Lyapunov solves use the direct Kronecker-product linear system, which
is trivial at this problem size (n = 6). When A itself is unstable the
iteration is seeded with a stabilizing gain from Bass's algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoStabilizingSolution, ValidationError
from .linearize import StateSpaceModel
from .model import JointState, TorqueCommand

ARE_MAX_ITER = 10_000
ARE_RESIDUAL_TOL = 1e-8  # scaled by max|Q|
_SYM_TOL = 1e-12


@dataclass(frozen=True)
class LqrWeights:
    """State weight Q (symmetric PSD) and input weight R (symmetric PD)."""

    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        q = np.atleast_2d(np.array(self.Q, dtype=float))
        r = np.atleast_2d(np.array(self.R, dtype=float))
        if q.shape[0] != q.shape[1] or r.shape[0] != r.shape[1]:
            raise ValidationError("Q and R must be square")
        if np.max(np.abs(q - q.T)) > _SYM_TOL * max(1.0, np.max(np.abs(q))):
            raise ValidationError("Q must be symmetric")
        if np.max(np.abs(r - r.T)) > _SYM_TOL * max(1.0, np.max(np.abs(r))):
            raise ValidationError("R must be symmetric")
        if np.min(np.linalg.eigvalsh(q)) < -1e-9 * max(1.0, np.max(np.abs(q))):
            raise ValidationError("Q must be positive semidefinite")
        if np.min(np.linalg.eigvalsh(r)) <= 0.0:
            raise ValidationError("R must be positive definite")
        q.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "Q", q)
        object.__setattr__(self, "R", r)

    @classmethod
    def from_diagonals(cls, q_diag, r_diag) -> "LqrWeights":
        return cls(Q=np.diag(np.asarray(q_diag, dtype=float)),
                   R=np.diag(np.asarray(r_diag, dtype=float)))


@dataclass(frozen=True)
class LqrGain:
    """Feedback gain K and the Riccati solution S it came from."""

    K: np.ndarray
    S: np.ndarray


@dataclass(frozen=True)
class PidGains:
    """Per-joint PID gains with an anti-windup clamp on the integral term."""

    kp: np.ndarray
    ki: np.ndarray
    kd: np.ndarray
    integral_limit: np.ndarray

    def __post_init__(self):
        for name in ("kp", "ki", "kd", "integral_limit"):
            arr = np.array(getattr(self, name), dtype=float).reshape(3)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(self.kp < 0.0) or np.any(self.kd < 0.0):
            raise ValidationError("kp and kd must be nonnegative")
        if np.any(self.integral_limit <= 0.0):
            raise ValidationError("integral_limit must be positive")


def default_lqr_weights() -> LqrWeights:
    """Default weights for the point-to-point regulator.

    Chosen so the fastest closed-loop pole stays well inside what the
    1 kHz zero-order-hold simulation loop can support while the slow poles
    give ~1-1.5 s settling; see the repository docs for the tuning notes.
    """
    return LqrWeights.from_diagonals(
        [10000.0, 60.0, 30.0, 800.0, 4.0, 4.0], [1.0, 1.0, 1.0]
    )


def solve_lyapunov(a: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Solve A' S + S A + W = 0 via the Kronecker-product linear system."""
    n = a.shape[0]
    eye = np.eye(n)
    op = np.kron(eye, a.T) + np.kron(a.T, eye)
    s = np.linalg.solve(op, -w.reshape(n * n)).reshape(n, n)
    return 0.5 * (s + s.T)


def spectral_abscissa(a: np.ndarray) -> float:
    return float(np.max(np.linalg.eigvals(a).real))


def _stabilizing_seed(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Stabilizing initial gain via Bass's algorithm.

    For beta exceeding the spectral radius of A, the Lyapunov solution of
    (A + beta I) P + P (A + beta I)' = 2 B B' gives K = B' P^-1 with
    A - B K Hurwitz, provided (A, B) is controllable.
    """
    beta = float(np.linalg.norm(a, "fro")) + 0.5
    shifted = (a + beta * np.eye(a.shape[0])).T
    p = solve_lyapunov(shifted, -2.0 * b @ b.T)
    try:
        k = np.linalg.solve(p, b).T
    except np.linalg.LinAlgError as exc:
        raise NoStabilizingSolution("stabilizing seed failed: P singular") from exc
    if spectral_abscissa(a - b @ k) >= 0.0:
        raise NoStabilizingSolution("Bass seed did not stabilize the pair (A, B)")
    return k


def are_residual(a: np.ndarray, b: np.ndarray, w: LqrWeights, s: np.ndarray) -> float:
    """Max-norm Riccati residual scaled by max|Q|."""
    res = a.T @ s + s @ a - s @ b @ np.linalg.solve(w.R, b.T @ s) + w.Q
    scale = max(np.max(np.abs(w.Q)), 1.0)
    return float(np.max(np.abs(res)) / scale)


def solve_are(a: np.ndarray, b: np.ndarray, w: LqrWeights,
              max_iter: int = ARE_MAX_ITER) -> np.ndarray:
    """Stabilizing solution of the continuous algebraic Riccati equation."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float).reshape(a.shape[0], -1)
    n = a.shape[0]
    q, r = w.Q, w.R
    if q.shape[0] != n or r.shape[0] != b.shape[1]:
        raise ValidationError("weight dimensions do not match the system")

    k = np.zeros((b.shape[1], n))
    if spectral_abscissa(a) >= 0.0:
        k = _stabilizing_seed(a, b)

    s = np.zeros((n, n))
    tol = 1e-12
    for _ in range(max_iter):
        a_cl = a - b @ k
        s = solve_lyapunov(a_cl, q + k.T @ r @ k)
        k_next = np.linalg.solve(r, b.T @ s)
        delta = np.max(np.abs(k_next - k))
        k = k_next
        if delta <= tol * (1.0 + np.max(np.abs(k))):
            break
    else:
        raise NoStabilizingSolution(f"Riccati iteration did not converge in {max_iter} steps")

    if spectral_abscissa(a - b @ np.linalg.solve(r, b.T @ s)) >= 0.0:
        raise NoStabilizingSolution("converged solution is not stabilizing")
    return s


def lqr_gain(model: StateSpaceModel, w: LqrWeights) -> LqrGain:
    """Synthesize the full-state feedback gain K = R^-1 B' S."""
    s = solve_are(model.A, model.B, w)
    k = np.linalg.solve(w.R, model.B.T @ s)
    residual = are_residual(model.A, model.B, w, s)
    if residual >= ARE_RESIDUAL_TOL:
        raise NoStabilizingSolution(f"Riccati residual {residual:.3e} above tolerance")
    return LqrGain(K=k, S=s)


def lqr_control(gain: LqrGain, state: JointState, reference: JointState,
                feedforward: TorqueCommand) -> TorqueCommand:
    """tau = feedforward - K (x - x_ref) in stacked (theta, omega) coordinates."""
    error = state.as_vector() - reference.as_vector()
    return TorqueCommand(tau=feedforward.tau - gain.K @ error)


def pid_control(gains: PidGains, state: JointState, reference: JointState,
                integral_state, dt: float, feedforward: TorqueCommand):
    """One PID evaluation; returns (torque, updated integral state).

    The derivative term acts on the measured velocity rather than the error
    derivative, avoiding a setpoint kick at t = 0. The integral state is
    clamped to +/- integral_limit after accumulation.
    """
    if dt <= 0.0:
        raise ValidationError("dt must be positive")
    error = reference.theta - state.theta
    integral = np.clip(np.asarray(integral_state, dtype=float) + error * dt,
                       -gains.integral_limit, gains.integral_limit)
    tau = (feedforward.tau + gains.kp * error + gains.ki * integral
           - gains.kd * state.omega)
    return TorqueCommand(tau=tau), integral


def quadratic_cost(trajectory, w: LqrWeights) -> float:
    """Accumulated cost sum((x'Qx + u'Ru) * dt) over (state_error, torque_delta, dt) samples."""
    total = 0.0
    count = 0
    for x_err, u_delta, dt in trajectory:
        x = np.asarray(x_err, dtype=float).reshape(6)
        u = np.asarray(u_delta, dtype=float).reshape(3)
        total += (x @ w.Q @ x + u @ w.R @ u) * dt
        count += 1
    if count == 0:
        raise ValidationError("trajectory must be nonempty")
    return float(total)
