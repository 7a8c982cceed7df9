"""Physical parameters and state containers for the 3-DoF articulated arm.

All quantities are SI internally: meters, kilograms, radians, N*m.
The types are immutable value objects and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MassMismatch, NonPositiveDimension, ValidationError

MASS_SUM_TOL = 1e-9


def _frozen_vector(value, n: int, name: str) -> np.ndarray:
    arr = np.array(value, dtype=float).reshape(-1)
    if arr.shape != (n,):
        raise ValidationError(f"{name} must have {n} components, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ManipulatorParams:
    """Link lengths, per-link masses and gravity for the arm.

    ``a1`` is the vertical base link, ``a2``/``a3`` the two planar links.
    ``m_total`` is bookkeeping only; dynamics use the per-link masses.
    """

    a1: float
    a2: float
    a3: float
    m1: float
    m2: float
    m3: float
    g: float = 9.81
    m_total: float = field(default=0.0)

    def __post_init__(self):
        if self.m_total == 0.0:
            object.__setattr__(self, "m_total", self.m1 + self.m2 + self.m3)

    @property
    def reach(self) -> float:
        return self.a2 + self.a3

    @classmethod
    def from_total_mass(cls, a1: float, a2: float, a3: float, m_total: float,
                        g: float = 9.81) -> "ManipulatorParams":
        """Distribute a total mass over the links proportionally to length.

        Consistent with the uniform slender-rod inertia terms used by the
        dynamics model.
        """
        total_len = a1 + a2 + a3
        if total_len <= 0.0:
            raise NonPositiveDimension("link lengths must be positive")
        return cls(
            a1=a1, a2=a2, a3=a3,
            m1=m_total * a1 / total_len,
            m2=m_total * a2 / total_len,
            m3=m_total * a3 / total_len,
            g=g,
            m_total=m_total,
        )


def default_params() -> ManipulatorParams:
    """Default arm: 25/15/15 cm links, 2.5 kg total, g = 9.81 m/s^2."""
    return ManipulatorParams.from_total_mass(0.25, 0.15, 0.15, 2.5)


def validate_params(p: ManipulatorParams) -> None:
    """Raise if dimensions are non-positive or masses are inconsistent."""
    for name in ("a1", "a2", "a3", "m1", "m2", "m3", "g"):
        value = getattr(p, name)
        if not math.isfinite(value) or value <= 0.0:
            raise NonPositiveDimension(f"{name} must be positive, got {value}")
    mass_sum = p.m1 + p.m2 + p.m3
    if abs(mass_sum - p.m_total) > MASS_SUM_TOL:
        raise MassMismatch(
            f"per-link masses sum to {mass_sum} kg, declared total {p.m_total} kg"
        )


@dataclass(frozen=True)
class JointState:
    """Joint angles (rad) and angular velocities (rad/s), three each."""

    theta: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "theta", _frozen_vector(self.theta, 3, "theta"))
        object.__setattr__(self, "omega", _frozen_vector(self.omega, 3, "omega"))
        if not (np.all(np.isfinite(self.theta)) and np.all(np.isfinite(self.omega))):
            raise ValidationError("joint state entries must be finite")

    @classmethod
    def at_rest(cls, theta) -> "JointState":
        return cls(theta=theta, omega=np.zeros(3))

    @classmethod
    def from_vector(cls, x) -> "JointState":
        x = np.asarray(x, dtype=float).reshape(6)
        return cls(theta=x[:3], omega=x[3:])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.theta, self.omega])


@dataclass(frozen=True)
class TorqueCommand:
    """Joint torques in N*m."""

    tau: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "tau", _frozen_vector(self.tau, 3, "tau"))
        if not np.all(np.isfinite(self.tau)):
            raise ValidationError("torque entries must be finite")

    @classmethod
    def zero(cls) -> "TorqueCommand":
        return cls(tau=np.zeros(3))
