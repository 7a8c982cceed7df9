import numpy as np
import pytest

from arm3dof import (JointState, ManipulatorParams, MassMismatch,
                     NonPositiveDimension, TorqueCommand, ValidationError,
                     default_params, validate_params)


def test_default_params_values():
    p = default_params()
    assert p.a1 == pytest.approx(0.25)
    assert p.a2 == pytest.approx(0.15)
    assert p.a3 == pytest.approx(0.15)
    assert p.m1 + p.m2 + p.m3 == pytest.approx(2.5)
    # Mass splits proportionally to length: 25/55, 15/55, 15/55 of 2.5 kg.
    assert p.m1 == pytest.approx(2.5 * 25.0 / 55.0)
    assert p.m2 == pytest.approx(p.m3)
    assert p.g == 9.81
    assert p.reach == pytest.approx(0.30)
    validate_params(p)


def test_explicit_masses_fill_total():
    p = ManipulatorParams(a1=0.2, a2=0.1, a3=0.1, m1=1.0, m2=0.5, m3=0.5)
    assert p.m_total == pytest.approx(2.0)
    validate_params(p)


def test_nonpositive_dimension_rejected():
    p = ManipulatorParams(a1=0.25, a2=-0.15, a3=0.15, m1=1.0, m2=1.0, m3=0.5)
    with pytest.raises(NonPositiveDimension):
        validate_params(p)


def test_mass_mismatch_rejected():
    p = ManipulatorParams(a1=0.25, a2=0.15, a3=0.15,
                          m1=1.0, m2=1.0, m3=0.5, m_total=3.0)
    with pytest.raises(MassMismatch):
        validate_params(p)


def test_joint_state_roundtrip():
    rng = np.random.default_rng(7)
    x = rng.normal(size=6)
    state = JointState.from_vector(x)
    assert np.array_equal(state.as_vector(), x)
    assert np.array_equal(JointState.at_rest(x[:3]).omega, np.zeros(3))


def test_state_arrays_are_read_only():
    state = JointState.at_rest([0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        state.theta[0] = 1.0
    tau = TorqueCommand.zero()
    with pytest.raises(ValueError):
        tau.tau[1] = 2.0


def test_nonfinite_state_rejected():
    with pytest.raises(ValidationError):
        JointState(theta=[np.nan, 0.0, 0.0], omega=np.zeros(3))
    with pytest.raises(ValidationError):
        TorqueCommand(tau=[np.inf, 0.0, 0.0])


def test_wrong_shape_rejected():
    with pytest.raises(ValidationError):
        JointState(theta=[0.0, 0.0], omega=np.zeros(3))
