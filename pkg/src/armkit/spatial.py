"""Elementary rotations, ZYX (yaw-pitch-roll) composition and its inverse."""

import math
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError

GIMBAL_TOL = 1e-9


class EulerZYX(NamedTuple):
    phi: float  # yaw about z
    theta: float  # pitch about y
    psi: float  # roll about x
    gimbal_lock: bool = False

    def matrix(self):
        return compose_zyx(self.phi, self.theta, self.psi)


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameterError(name, f"non-finite angle {value!r}")
    return value


def rot_x(angle):
    a = _finite("angle", angle)
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle):
    a = _finite("angle", angle)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle):
    a = _finite("angle", angle)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def compose_zyx(phi, theta, psi):
    """R = Rz(phi) @ Ry(theta) @ Rx(psi), written out entry by entry."""
    phi = _finite("phi", phi)
    theta = _finite("theta", theta)
    psi = _finite("psi", psi)
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(psi), math.sin(psi)
    return np.array([
        [ct * cf, sp * st * cf - cp * sf, cp * st * cf + sp * sf],
        [ct * sf, sp * st * sf + cp * cf, cp * st * sf - sp * cf],
        [-st, sp * ct, cp * ct],
    ])


def _wrap(angle):
    # map atan2's -pi onto +pi so the range is (-pi, pi]
    return math.pi if angle <= -math.pi else angle


def extract_euler(r):
    """Recover (phi, theta, psi) from a rotation matrix.

    Pitch comes from r31, yaw from the first column. Roll is read from the
    matrix with the recovered yaw removed, so it absorbs any error in yaw and
    stays consistent near pitch = +-90 deg. At gimbal lock yaw is pinned to 0
    and the result carries ``gimbal_lock=True``.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        raise InvalidParameterError("r", f"expected a 3x3 matrix, got shape {r.shape}")
    if not np.all(np.isfinite(r)):
        raise InvalidParameterError("r", "matrix has non-finite entries")
    r31 = float(r[2, 0])
    if abs(r31) > 1.0 + 1e-12:
        raise InvalidParameterError("r", f"|r31| = {abs(r31):.6g} exceeds 1")
    r31 = min(1.0, max(-1.0, r31))

    cos_theta = math.hypot(r[0, 0], r[1, 0])
    gimbal = cos_theta < GIMBAL_TOL
    phi = 0.0 if gimbal else math.atan2(r[1, 0], r[0, 0])
    theta = math.atan2(-r31, cos_theta)

    cf, sf = math.cos(phi), math.sin(phi)
    # second row of Rz(-phi) @ r is (0, cos psi, -sin psi)
    m22 = -sf * r[0, 1] + cf * r[1, 1]
    m23 = -sf * r[0, 2] + cf * r[1, 2]
    psi = math.atan2(-m23, m22)
    return EulerZYX(_wrap(phi), theta, _wrap(psi), gimbal)


def is_rotation(r, tol=1e-12):
    r = np.asarray(r, dtype=float)
    return (r.shape == (3, 3)
            and np.max(np.abs(r.T @ r - np.eye(3))) <= tol
            and abs(np.linalg.det(r) - 1.0) <= tol)
