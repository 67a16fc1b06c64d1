"""Servo torque, power, current, acceleration and battery endurance."""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParameterError

# Figures printed for the reference arm, kept for side-by-side reporting.
REFERENCE_ARM_NAME = "Sigma-3"
TABLE5_POWER_W = {
    "Base": 366.66,
    "Shoulder": 263.10,
    "Elbow": 181.45,
    "Wrist": 160.77,
    "Waist": 128.15,
    "Claw": 74.27,
}
TABLE5_RPM = {"Base": 87, "Shoulder": 40, "Elbow": 40, "Wrist": 35, "Waist": 25, "Claw": 20}
CLAIMED_TOTAL_POWER_W = 1172.0
CLAIMED_MIN_ENDURANCE_H = 4.0
TABLE1_OPERATING_TIME_MIN = 45.0


class PowerConvention(str, Enum):
    PAPER = "paper"  # tau * pi * n, as printed (no RPM -> rad/s factor of 1/30)
    SI = "si"  # tau * (pi * n / 30)


def _nonneg(name, value):
    if not value >= 0:
        raise InvalidParameterError(name, f"must be >= 0, got {value!r}")


def _positive(name, value):
    if not value > 0:
        raise InvalidParameterError(name, f"must be > 0, got {value!r}")


@dataclass(frozen=True)
class FrictionCoeffs:
    b_c: float = 0.0  # Coulomb, N*m
    b_v: float = 0.0  # viscous, N*m*s/rad

    def __post_init__(self):
        _nonneg("b_c", self.b_c)
        _nonneg("b_v", self.b_v)


@dataclass(frozen=True)
class TorqueBreakdown:
    gravity: float
    friction: float
    total: float
    minimum: float


def gravity_torque(m, l, theta, g):
    _nonneg("mass", m)
    _nonneg("length", l)
    _nonneg("gravity", g)
    return m * g * l * math.cos(theta)


def friction_torque(coeffs, theta_dot):
    # viscous term scales with joint rate
    return coeffs.b_c + coeffs.b_v * theta_dot


def min_torque(m, l, omega, t, g):
    """Torque to hold the link and spin it up to ``omega`` within ``t`` seconds."""
    _positive("ramp_time", t)
    return m * l * l * (omega / t) + m * g * l


def torque_breakdown(m, l, theta, omega, t, g, coeffs=FrictionCoeffs(), theta_dot=0.0):
    tau_g = gravity_torque(m, l, theta, g)
    tau_f = friction_torque(coeffs, theta_dot)
    return TorqueBreakdown(tau_g, tau_f, tau_g + tau_f, min_torque(m, l, omega, t, g))


def servo_power(tau, n, convention=PowerConvention.PAPER):
    _nonneg("rpm", n)
    convention = PowerConvention(convention)
    if convention is PowerConvention.PAPER:
        return tau * math.pi * n
    return tau * (math.pi * n / 30.0)


def current_draw(p, v):
    """Current in mA drawn at ``p`` watts from a ``v`` volt supply."""
    _positive("voltage", v)
    return 1000.0 * p / v


def angular_acceleration(n, t):
    _positive("ramp_time", t)
    return math.pi * n / (30.0 * t)


@dataclass(frozen=True)
class ServoPower:
    name: str
    torque: float
    rpm: float
    power: float  # W
    current: float  # mA


@dataclass(frozen=True)
class PowerBudget:
    servos: tuple
    convention: PowerConvention

    @property
    def total_power(self):
        return sum(s.power for s in self.servos)

    @property
    def total_current(self):
        return sum(s.current for s in self.servos)


def arm_power_budget(arm, convention=PowerConvention.PAPER):
    convention = PowerConvention(convention)
    rows = []
    for joint in arm.joints:
        s = joint.servo
        p = servo_power(s.rated_torque, s.max_speed, convention)
        rows.append(ServoPower(joint.name, s.rated_torque, s.max_speed, p,
                               current_draw(p, s.voltage)))
    return PowerBudget(tuple(rows), convention)


def endurance(capacity_mah, v, p_total, duty=1.0):
    """Hours of operation: stored energy over average draw."""
    _positive("capacity", capacity_mah)
    _positive("voltage", v)
    _positive("power", p_total)
    if not 0 < duty <= 1:
        raise InvalidParameterError("duty", f"must lie in (0, 1], got {duty!r}")
    return (capacity_mah / 1000.0 * v) / (p_total * duty)


def pulse_to_angle(servo, pulses):
    if pulses < 0:
        raise InvalidParameterError("pulses", f"must be >= 0, got {pulses!r}")
    return min(pulses * servo.deg_per_pulse, servo.rotation_range)


def is_reference_arm(arm):
    return arm.name == REFERENCE_ARM_NAME and set(arm.joint_names) <= set(TABLE5_POWER_W)


def table5_total_power():
    return sum(TABLE5_POWER_W.values())
