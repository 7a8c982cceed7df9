import math

import numpy as np
import pytest

from arm3dof import (JointState, LqrGain, LqrWeights, NoStabilizingSolution,
                     PidGains, TorqueCommand, ValidationError,
                     default_lqr_weights, linearize_about, lqr_control,
                     lqr_gain, pid_control, quadratic_cost, solve_are,
                     solve_lyapunov)
from arm3dof.control import are_residual, spectral_abscissa


def test_lyapunov_scalar():
    # a s + s a + w = 0 with a=-2, w=4 -> s=1.
    s = solve_lyapunov(np.array([[-2.0]]), np.array([[4.0]]))
    assert s[0, 0] == pytest.approx(1.0, abs=1e-14)


def test_lyapunov_residual_random():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = rng.normal(size=(6, 6)) - 4.0 * np.eye(6)
        w_half = rng.normal(size=(6, 6))
        w = w_half @ w_half.T
        s = solve_lyapunov(a, w)
        assert np.max(np.abs(a.T @ s + s @ a + w)) < 1e-9
        assert np.max(np.abs(s - s.T)) < 1e-12


def test_are_scalar_analytic():
    # a=0, b=1, q=4, r=1: s^2 = q -> s=2, k=2.
    w = LqrWeights(Q=np.array([[4.0]]), R=np.array([[1.0]]))
    s = solve_are(np.array([[0.0]]), np.array([[1.0]]), w)
    assert s[0, 0] == pytest.approx(2.0, abs=1e-9)


def test_are_double_integrator_analytic():
    """Closed form K = [sqrt(q1), sqrt(q2 + 2 sqrt(q1))] for r=1."""
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[0.0], [1.0]])
    q1, q2 = 10000.0, 800.0
    w = LqrWeights.from_diagonals([q1, q2], [1.0])
    s = solve_are(a, b, w)
    k = (np.linalg.solve(w.R, b.T @ s)).reshape(2)
    expected = [math.sqrt(q1), math.sqrt(q2 + 2.0 * math.sqrt(q1))]
    assert k == pytest.approx(expected, abs=1e-6)
    assert k[1] == pytest.approx(31.622776601683793, abs=1e-6)


def test_are_hurwitz_zero_q():
    # Stable plant, Q=0: the cost is already zero with K=0, so S=0.
    a = np.array([[-1.0, 0.5], [0.0, -2.0]])
    b = np.array([[0.0], [1.0]])
    w = LqrWeights(Q=np.zeros((2, 2)), R=np.array([[3.0]]))
    s = solve_are(a, b, w)
    assert np.max(np.abs(s)) < 1e-12


def test_are_scaling_invariance(params, start_goal):
    """Scaling Q and R together leaves the gain unchanged."""
    _, goal = start_goal
    model = linearize_about(params, goal)
    base = lqr_gain(model, default_lqr_weights()).K
    for c in (0.1, 10.0):
        w = default_lqr_weights()
        scaled = LqrWeights(Q=c * w.Q, R=c * w.R)
        k = lqr_gain(model, scaled).K
        assert np.max(np.abs(k - base)) < 1e-6 * np.max(np.abs(base))


def test_manipulator_gain_properties(params, start_goal):
    _, goal = start_goal
    model = linearize_about(params, goal)
    w = default_lqr_weights()
    gain = lqr_gain(model, w)
    assert are_residual(model.A, model.B, w, gain.S) < 1e-8
    assert spectral_abscissa(model.A - model.B @ gain.K) < 0.0
    eigs = np.linalg.eigvalsh(gain.S)
    assert eigs.min() > 0.0


def test_uncontrollable_pair_rejected():
    # Unstable mode with no input authority: no stabilizing solution exists.
    a = np.array([[1.0, 0.0], [0.0, -1.0]])
    b = np.array([[0.0], [1.0]])
    w = LqrWeights.from_diagonals([1.0, 1.0], [1.0])
    with pytest.raises(NoStabilizingSolution):
        solve_are(a, b, w)


def test_weights_validation():
    with pytest.raises(ValidationError):
        LqrWeights(Q=np.array([[1.0, 2.0], [0.0, 1.0]]), R=np.eye(1))
    with pytest.raises(ValidationError):
        LqrWeights(Q=np.eye(2), R=np.array([[0.0]]))
    with pytest.raises(ValidationError):
        LqrWeights(Q=-np.eye(2), R=np.eye(1))
    with pytest.raises(ValidationError):
        LqrWeights(Q=np.eye(2), R=np.eye(2, 3))


def test_pid_gain_validation():
    with pytest.raises(ValidationError):
        PidGains(kp=[-1.0, 1.0, 1.0], ki=np.zeros(3), kd=np.zeros(3),
                 integral_limit=np.ones(3))
    with pytest.raises(ValidationError):
        PidGains(kp=np.ones(3), ki=np.zeros(3), kd=np.zeros(3),
                 integral_limit=np.zeros(3))


def test_lqr_control_at_reference_is_feedforward(params, start_goal):
    _, goal = start_goal
    model = linearize_about(params, goal)
    gain = lqr_gain(model, default_lqr_weights())
    ref = JointState.at_rest(goal)
    ff = TorqueCommand(tau=[0.1, 0.2, 0.3])
    tau = lqr_control(gain, ref, ref, ff)
    assert np.array_equal(tau.tau, ff.tau)


def test_pid_control_antiwindup_clamp():
    gains = PidGains(kp=np.zeros(3), ki=np.ones(3), kd=np.zeros(3),
                     integral_limit=[0.5, 0.5, 0.5])
    state = JointState.at_rest(np.zeros(3))
    reference = JointState.at_rest([10.0, -10.0, 0.0])
    integral = np.zeros(3)
    for _ in range(100):
        tau, integral = pid_control(gains, state, reference, integral,
                                    dt=0.01, feedforward=TorqueCommand.zero())
    assert integral == pytest.approx([0.5, -0.5, 0.0])
    assert tau.tau == pytest.approx([0.5, -0.5, 0.0])


def test_pid_derivative_on_measurement():
    gains = PidGains(kp=np.zeros(3), ki=np.zeros(3), kd=[2.0, 2.0, 2.0],
                     integral_limit=np.ones(3))
    state = JointState(theta=np.zeros(3), omega=[1.0, -0.5, 0.0])
    reference = JointState.at_rest([1.0, 1.0, 1.0])
    tau, _ = pid_control(gains, state, reference, np.zeros(3), dt=0.01,
                         feedforward=TorqueCommand.zero())
    # Pure damping against measured velocity; the position step adds no kick.
    assert tau.tau == pytest.approx([-2.0, 1.0, 0.0])


def test_quadratic_cost_single_sample():
    w = LqrWeights.from_diagonals([10000.0, 0.0, 0.0, 0.0, 0.0, 0.0], [1.0, 1.0, 1.0])
    x_err = np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    cost = quadratic_cost([(x_err, np.zeros(3), 1.0)], w)
    assert cost == pytest.approx(10000.0)
    with pytest.raises(ValidationError):
        quadratic_cost([], w)
