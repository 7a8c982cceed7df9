import numpy as np
import pytest

from arm3dof import default_params, inverse_kinematics


@pytest.fixture(scope="session")
def params():
    return default_params()


@pytest.fixture(scope="session")
def start_goal(params):
    """Joint angles for the default 10/10/10 cm -> 15/25/20 cm experiment."""
    start = inverse_kinematics(params, np.array([0.10, 0.10, 0.10]))
    goal = inverse_kinematics(params, np.array([0.15, 0.25, 0.20]))
    return start, goal
