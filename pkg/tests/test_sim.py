import math

import numpy as np
import pytest

from arm3dof import (Controller, JointState, SimConfig, TorqueCommand,
                     ValidationError, compute_metrics, default_lqr_weights,
                     equilibrium_torque, rk4_step, simulate)
from arm3dof.sim import _rk4_raw


def test_equilibrium_is_fixed_point(params):
    """A rest pose under its gravity-hold torque stays put through RK4."""
    rng = np.random.default_rng(21)
    for _ in range(5):
        theta = rng.uniform(-math.pi, math.pi, size=3)
        state = JointState.at_rest(theta)
        tau = equilibrium_torque(params, theta)
        x = state.as_vector()
        for _ in range(100):
            x = _rk4_raw(params, x, tau.tau, 0.001)
        assert np.max(np.abs(x - state.as_vector())) < 1e-12


def test_upright_pose_zero_torque(params):
    """Upright pose needs no torque at all and is exactly stationary."""
    state = JointState.at_rest([0.3, math.pi / 2.0, 0.0])
    x = state.as_vector()
    for _ in range(1000):
        x = _rk4_raw(params, x, np.zeros(3), 0.001)
    assert np.max(np.abs(x[:3] - state.theta)) < 1e-9


def test_rk4_step_validates_dt(params):
    state = JointState.at_rest(np.zeros(3))
    with pytest.raises(ValidationError):
        rk4_step(params, state, TorqueCommand.zero(), 0.0)


def test_rk4_fourth_order(params):
    """Halving dt shrinks the global error ~16x on a torque-driven swing."""
    x0 = np.concatenate([[0.3, -0.8, 1.1], np.zeros(3)])
    tau = equilibrium_torque(params, x0[:3]).tau + np.array([0.05, 0.03, -0.02])
    horizon = 0.1

    def integrate(dt):
        x = x0.copy()
        for _ in range(int(round(horizon / dt))):
            x = _rk4_raw(params, x, tau, dt)
        return x

    ref = integrate(1e-5)
    err_coarse = np.max(np.abs(integrate(1e-3) - ref))
    err_fine = np.max(np.abs(integrate(5e-4) - ref))
    order = math.log2(err_coarse / err_fine)
    assert order == pytest.approx(4.0, abs=0.3)


def test_sim_config_validation(params):
    state = JointState.at_rest(np.zeros(3))
    with pytest.raises(ValidationError):
        SimConfig(initial=state, reference=state, dt=0.02)
    with pytest.raises(ValidationError):
        SimConfig(initial=state, reference=state, dt=0.001, duration=0.0005)
    with pytest.raises(ValidationError):
        SimConfig(initial=state, reference=state, torque_limit=[1.0, -1.0, 1.0])


def test_simulate_shapes_and_determinism(params, start_goal):
    start, goal = start_goal
    cfg = SimConfig(initial=JointState.at_rest(start),
                    reference=JointState.at_rest(goal), duration=0.5)
    first = simulate(params, cfg)
    second = simulate(params, cfg)
    assert first.states.shape == (501, 6)
    assert first.torques.shape == (501, 3)
    assert np.array_equal(first.states, second.states)
    assert np.array_equal(first.torques, second.torques)
    assert np.array_equal(first.times, second.times)


def test_open_loop_holds_start(params, start_goal):
    start, _ = start_goal
    cfg = SimConfig(initial=JointState.at_rest(start),
                    reference=JointState.at_rest(start),
                    controller=Controller.OPEN_LOOP, duration=1.0)
    result = simulate(params, cfg)
    assert np.max(np.abs(result.states[-1, :3] - start)) < 1e-9
    assert np.all(result.metrics.zero_step)


def test_torque_limit_respected(params, start_goal):
    start, goal = start_goal
    cfg = SimConfig(initial=JointState.at_rest(start),
                    reference=JointState.at_rest(goal),
                    duration=0.2, torque_limit=[5.0, 5.0, 5.0])
    result = simulate(params, cfg)
    assert np.max(np.abs(result.torques)) <= 5.0 + 1e-12


def test_metrics_first_order_settling():
    """y = 1 - exp(-t/tau): the 2% crossing sits at tau * ln(50)."""
    tau_c = 0.3
    t = np.arange(0.0, 5.0 + 1e-12, 0.001)
    y = 1.0 - np.exp(-t / tau_c)
    states = np.zeros((t.size, 6))
    states[:, 0] = y
    states[:, 1] = 1.0  # zero-step joint already at its reference
    states[:, 3] = np.exp(-t / tau_c) / tau_c
    torques = np.zeros((t.size, 3))
    initial = JointState.at_rest([0.0, 1.0, 0.0])
    reference = JointState.at_rest([1.0, 1.0, 0.0])
    m = compute_metrics(t, states, torques, initial, reference)
    assert m.settling_time[0] == pytest.approx(tau_c * math.log(50.0), abs=0.002)
    assert m.overshoot_pct[0] == 0.0
    assert m.peak_velocity[0] == pytest.approx(1.0 / tau_c)
    assert m.settled[0] and m.settled[1] and m.settled[2]
    assert m.zero_step[1] and m.zero_step[2]


def test_metrics_overshoot_damped_sinusoid():
    """Peak of 1 + 0.1 exp(-t) sin-free bump gives 10% overshoot."""
    t = np.arange(0.0, 5.0 + 1e-12, 0.001)
    y = 1.0 - np.exp(-5.0 * t) + 0.1 * np.exp(-t) * np.sin(np.pi * t) ** 2
    states = np.zeros((t.size, 6))
    states[:, 0] = y
    m = compute_metrics(t, states, np.zeros((t.size, 3)),
                        JointState.at_rest(np.zeros(3)),
                        JointState.at_rest([1.0, 0.0, 0.0]))
    peak = float(np.max(y))
    assert m.overshoot_pct[0] == pytest.approx((peak - 1.0) * 100.0, abs=1e-9)


def test_metrics_cost_accumulates(params, start_goal):
    start, goal = start_goal
    cfg = SimConfig(initial=JointState.at_rest(start),
                    reference=JointState.at_rest(goal), duration=1.0)
    result = simulate(params, cfg)
    assert result.metrics.cost_J > 0.0
    # Longer horizon after settling adds almost nothing.
    cfg5 = SimConfig(initial=JointState.at_rest(start),
                     reference=JointState.at_rest(goal), duration=5.0)
    result5 = simulate(params, cfg5)
    assert result5.metrics.cost_J < result.metrics.cost_J * 1.5
