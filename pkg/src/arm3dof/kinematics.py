"""Denavit-Hartenberg kinematics for the 3-DoF articulated arm.

Joint 1 yaws about the vertical base axis, joints 2 and 3 pitch about
parallel horizontal axes. Forward kinematics is the DH transform chain;
inverse kinematics is closed form and returns the elbow-up branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularTarget, Unreachable
from .model import ManipulatorParams

# Tolerance on law-of-cosines arguments before declaring a target unreachable;
# keeps boundary targets (fully stretched arm) from producing NaN.
_COS_CLAMP_TOL = 1e-9
_BASE_AXIS_TOL = 1e-12


@dataclass(frozen=True)
class DhRow:
    """One DH table row: link length a, twist alpha, offset d, joint angle theta."""

    a: float
    alpha: float
    d: float
    theta: float


@dataclass(frozen=True)
class Transform:
    """Rigid transform: 3x3 rotation plus translation in meters."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = np.array(self.rotation, dtype=float).reshape(3, 3)
        t = np.array(self.translation, dtype=float).reshape(3)
        r.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    def compose(self, other: "Transform") -> "Transform":
        return Transform(
            rotation=self.rotation @ other.rotation,
            translation=self.rotation @ other.translation + self.translation,
        )


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def dh_table(p: ManipulatorParams, theta) -> list[DhRow]:
    """DH parameter rows for the arm at the given joint angles."""
    t1, t2, t3 = np.asarray(theta, dtype=float).reshape(3)
    return [
        DhRow(a=0.0, alpha=math.pi / 2.0, d=p.a1, theta=t1),
        DhRow(a=p.a2, alpha=0.0, d=0.0, theta=t2),
        DhRow(a=p.a3, alpha=0.0, d=0.0, theta=t3),
    ]


def dh_transform(row: DhRow) -> Transform:
    """Single-link transform from one DH row."""
    ct, st = math.cos(row.theta), math.sin(row.theta)
    ca, sa = math.cos(row.alpha), math.sin(row.alpha)
    rotation = np.array([
        [ct, -st * ca, st * sa],
        [st, ct * ca, -ct * sa],
        [0.0, sa, ca],
    ])
    translation = np.array([row.a * ct, row.a * st, row.d])
    return Transform(rotation=rotation, translation=translation)


def chain_transform(p: ManipulatorParams, theta) -> Transform:
    """Base-to-end-effector transform: product of the three link transforms."""
    rows = dh_table(p, theta)
    transform = dh_transform(rows[0])
    for row in rows[1:]:
        transform = transform.compose(dh_transform(row))
    return transform


def forward_kinematics(p: ManipulatorParams, theta) -> tuple[Point3, Point3, Point3, Point3]:
    """Positions of the base and the three link endpoints."""
    t1, t2, t3 = np.asarray(theta, dtype=float).reshape(3)
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    c23, s23 = math.cos(t2 + t3), math.sin(t2 + t3)
    planar = p.a3 * c23 + p.a2 * c2
    return (
        Point3(0.0, 0.0, 0.0),
        Point3(0.0, 0.0, p.a1),
        Point3(p.a2 * c1 * c2, p.a2 * s1 * c2, p.a2 * s2 + p.a1),
        Point3(c1 * planar, s1 * planar, p.a3 * s23 + p.a2 * s2 + p.a1),
    )


def end_effector(p: ManipulatorParams, theta) -> Point3:
    return forward_kinematics(p, theta)[3]


def _clamped_acos(value: float) -> float:
    if abs(value) > 1.0 + _COS_CLAMP_TOL:
        raise Unreachable(f"law-of-cosines argument {value} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, value)))


def inverse_kinematics(p: ManipulatorParams, target) -> np.ndarray:
    """Joint angles reaching a Cartesian target, elbow-up branch.

    The base angle is resolved with atan2 so all four quadrants work; a
    target on the base axis has no defined yaw and raises SingularTarget.
    """
    if isinstance(target, Point3):
        x3, y3, z3 = target.x, target.y, target.z
    else:
        x3, y3, z3 = np.asarray(target, dtype=float).reshape(3)

    r1 = math.hypot(x3, y3)
    if r1 < _BASE_AXIS_TOL:
        raise SingularTarget("target on the base axis: theta1 is undefined")
    r2 = z3 - p.a1
    r3 = math.hypot(r1, r2)
    if r3 > p.a2 + p.a3 + _COS_CLAMP_TOL or r3 < abs(p.a2 - p.a3) - _COS_CLAMP_TOL:
        raise Unreachable(
            f"planar distance {r3:.6f} m outside [{abs(p.a2 - p.a3):.6f}, {p.a2 + p.a3:.6f}] m"
        )

    theta1 = math.atan2(y3, x3)
    phi2 = math.atan2(r2, r1)
    phi1 = _clamped_acos((p.a2 ** 2 + r3 ** 2 - p.a3 ** 2) / (2.0 * p.a2 * r3))
    theta2 = phi2 - phi1
    phi3 = _clamped_acos((p.a2 ** 2 + p.a3 ** 2 - r3 ** 2) / (2.0 * p.a2 * p.a3))
    theta3 = math.pi - phi3
    return np.array([theta1, theta2, theta3])
