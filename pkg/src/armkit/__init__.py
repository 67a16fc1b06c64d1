"""Kinematics, actuation and damping analysis for a six-joint servo arm."""

from ._accel import backend
from .arm_model import ArmDescription, JointKind, joint_freedoms, load_arm, sample_arm
from .errors import (ArmkitError, ConfigError, ConvergenceError, DomainError,
                     InsufficientPeaksError, InvalidParameterError, NeverSettlesError,
                     ReachabilityError)

__version__ = "0.1.0"

__all__ = [
    "ArmDescription", "JointKind", "joint_freedoms", "load_arm", "sample_arm", "backend",
    "ArmkitError", "ConfigError", "ConvergenceError", "DomainError",
    "InsufficientPeaksError", "InvalidParameterError", "NeverSettlesError",
    "ReachabilityError",
]
