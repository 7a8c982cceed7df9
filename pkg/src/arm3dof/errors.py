"""Exception hierarchy shared across the package.

Each error carries a short machine-parsable ``category`` and the process
exit code the CLI maps it to.
"""


class Arm3DofError(Exception):
    category = "error"
    exit_code = 1


class ValidationError(Arm3DofError):
    category = "validation"
    exit_code = 2


class NonPositiveDimension(ValidationError):
    """A link length or mass is zero or negative."""


class MassMismatch(ValidationError):
    """Per-link masses do not add up to the declared total mass."""


class Unreachable(Arm3DofError):
    """Cartesian target lies outside the reachable workspace annulus."""

    category = "unreachable"
    exit_code = 3


class SingularTarget(Arm3DofError):
    """Target on the base axis: the base yaw angle is undefined."""

    category = "singular"
    exit_code = 3


class SingularInertia(Arm3DofError):
    """Inertia matrix is numerically singular at this configuration."""

    category = "singular"
    exit_code = 3


class NoStabilizingSolution(Arm3DofError):
    """Riccati iteration failed to produce a stabilizing solution."""

    category = "synthesis"
    exit_code = 4


class ControllerSynthesisFailed(Arm3DofError):
    """Controller could not be synthesized for the requested setpoint."""

    category = "synthesis"
    exit_code = 4
