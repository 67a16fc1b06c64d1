"""Position kinematics of the base/shoulder/elbow chain.

Two models live here and are deliberately kept apart:

* the spatial rigid arm: base yaw ``phi`` plus a shoulder/elbow pair working
  in the vertical plane through the target (``ik`` / ``fk``);
* the planar elastic arm: two links whose tips carry small deflections,
  evaluated to first order (``elastic_fk`` / ``elastic_ik``).

Angle conventions for the rigid arm: ``theta`` is shoulder elevation above
the horizontal, ``psi`` is how far the elbow bends away from full extension,
so the forearm's absolute elevation is ``theta - psi``.
"""

import math
from typing import NamedTuple

import numpy as np

from ._accel import kernel
from .errors import ConvergenceError, InvalidParameterError, ReachabilityError

REACH_TOL = 1e-9
MAX_DEFLECTION_ROTATION = 0.1  # rad
NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 100
FD_STEP = 1e-7

ELBOW_UP = "up"
ELBOW_DOWN = "down"


class TargetPoint(NamedTuple):
    x: float
    y: float
    z: float


class IkSolution(NamedTuple):
    phi: float
    theta: float
    psi: float
    branch: str = ELBOW_UP


class JointVector(NamedTuple):
    theta1: float
    theta2: float  # relative to link 1


class DeflectionVector(NamedTuple):
    dx1: float = 0.0
    dy1: float = 0.0
    dphi1: float = 0.0
    dx2: float = 0.0
    dy2: float = 0.0
    dphi2: float = 0.0

    def validate(self):
        for name, value in zip(self._fields, self):
            if not math.isfinite(value):
                raise InvalidParameterError(f"eps.{name}", "non-finite deflection")
        for name in ("dphi1", "dphi2"):
            if abs(getattr(self, name)) >= MAX_DEFLECTION_ROTATION:
                raise InvalidParameterError(
                    f"eps.{name}",
                    f"|{getattr(self, name):.6g}| rad is outside the first-order "
                    f"regime (< {MAX_DEFLECTION_ROTATION})")
        return self

    def reach_margin(self, l2):
        """Upper bound on how far the deflections can move the tip."""
        return (math.hypot(self.dx1, self.dy1) + math.hypot(self.dx2, self.dy2)
                + l2 * abs(self.dphi1))


ZERO_DEFLECTION = DeflectionVector()


def _check_lengths(l_ab, l_bc):
    for name, value in (("l_ab", l_ab), ("l_bc", l_bc)):
        if not (math.isfinite(value) and value > 0):
            raise InvalidParameterError(name, f"link length must be positive, got {value!r}")


def _branch_sign(branch):
    if branch == ELBOW_UP:
        return 1.0
    if branch == ELBOW_DOWN:
        return -1.0
    raise InvalidParameterError("branch", f"expected 'up' or 'down', got {branch!r}")


def _triangle_angles(a, b, d):
    """arccos of the shoulder and elbow law-of-cosines ratios.

    Evaluated as 2*atan2(sqrt(1 - c), sqrt(1 + c)) with 1 -+ c factored into
    side differences, which keeps full precision at the reach boundaries
    where a bare arccos of a ratio near +-1 loses half its digits. Factors
    are clamped at zero to absorb targets within tolerance outside the annulus.
    """
    e1 = max(0.0, d - a + b)
    e2 = max(0.0, d + a - b)
    e3 = max(0.0, a + b - d)
    e4 = a + b + d
    shoulder = 2.0 * math.atan2(math.sqrt(e1 * e3), math.sqrt(e2 * e4))
    elbow = 2.0 * math.atan2(math.sqrt(e1 * e2), math.sqrt(e3 * e4))
    return shoulder, elbow


# ------------------------------------------------------------ rigid arm

def solve_base_angle(x, y):
    """Base yaw toward (x, y); 0 when the target sits on the base axis."""
    if x == 0 and y == 0:
        return 0.0
    return math.atan2(y, x)


def solve_planar_2link(r, z, l_ab, l_bc, branch=ELBOW_UP):
    """Shoulder and elbow angles placing the wrist at in-plane point (r, z)."""
    _check_lengths(l_ab, l_bc)
    sign = _branch_sign(branch)
    d = math.hypot(r, z)
    inner, outer = abs(l_ab - l_bc), l_ab + l_bc
    if d > outer + REACH_TOL or d < inner - REACH_TOL:
        raise ReachabilityError(d, inner, outer)
    acos_s, acos_e = _triangle_angles(l_ab, l_bc, d)
    theta = math.atan2(z, r) + sign * acos_s
    psi = sign * (math.pi - acos_e)
    return theta, psi


def ik(target, l_ab, l_bc, branch=ELBOW_UP):
    x, y, z = (float(c) for c in target)
    for name, value in zip("xyz", (x, y, z)):
        if not math.isfinite(value):
            raise InvalidParameterError(f"target.{name}", "non-finite coordinate")
    phi = solve_base_angle(x, y)
    try:
        theta, psi = solve_planar_2link(math.hypot(x, y), z, l_ab, l_bc, branch)
    except ReachabilityError as exc:
        raise ReachabilityError(exc.distance, exc.inner, exc.outer, (x, y, z)) from None
    return IkSolution(phi, theta, psi, branch)


def fk(solution, l_ab, l_bc):
    phi, theta, psi = solution[0], solution[1], solution[2]
    r = l_ab * math.cos(theta) + l_bc * math.cos(theta - psi)
    z = l_ab * math.sin(theta) + l_bc * math.sin(theta - psi)
    return TargetPoint(r * math.cos(phi), r * math.sin(phi), z)


# batch versions ------------------------------------------------------

def _ik_numpy(x, y, z, l_ab, l_bc, sign, phi, theta, psi, ok):
    r = np.hypot(x, y)
    d = np.hypot(r, z)
    inner, outer = np.abs(l_ab - l_bc), l_ab + l_bc
    ok[:] = (d <= outer + REACH_TOL) & (d >= inner - REACH_TOL)
    e1 = np.maximum(0.0, d - l_ab + l_bc)
    e2 = np.maximum(0.0, d + l_ab - l_bc)
    e3 = np.maximum(0.0, l_ab + l_bc - d)
    e4 = l_ab + l_bc + d
    acos_s = 2.0 * np.arctan2(np.sqrt(e1 * e3), np.sqrt(e2 * e4))
    acos_e = 2.0 * np.arctan2(np.sqrt(e1 * e2), np.sqrt(e3 * e4))
    on_axis = (x == 0) & (y == 0)
    phi[:] = np.where(on_axis, 0.0, np.arctan2(y, x))
    theta[:] = np.arctan2(z, r) + sign * acos_s
    psi[:] = sign * (np.pi - acos_e)


@kernel(fallback=_ik_numpy)
def _ik_loop(x, y, z, l_ab, l_bc, sign, phi, theta, psi, ok):
    for i in range(x.shape[0]):
        a, b = l_ab[i], l_bc[i]
        r = math.hypot(x[i], y[i])
        d = math.hypot(r, z[i])
        ok[i] = abs(a - b) - REACH_TOL <= d <= a + b + REACH_TOL
        phi[i] = 0.0 if (x[i] == 0 and y[i] == 0) else math.atan2(y[i], x[i])
        e1 = max(0.0, d - a + b)
        e2 = max(0.0, d + a - b)
        e3 = max(0.0, a + b - d)
        e4 = a + b + d
        acos_s = 2.0 * math.atan2(math.sqrt(e1 * e3), math.sqrt(e2 * e4))
        acos_e = 2.0 * math.atan2(math.sqrt(e1 * e2), math.sqrt(e3 * e4))
        theta[i] = math.atan2(z[i], r) + sign * acos_s
        psi[i] = sign * (math.pi - acos_e)


def _fk_numpy(phi, theta, psi, l_ab, l_bc, out):
    r = l_ab * np.cos(theta) + l_bc * np.cos(theta - psi)
    out[:, 0] = r * np.cos(phi)
    out[:, 1] = r * np.sin(phi)
    out[:, 2] = l_ab * np.sin(theta) + l_bc * np.sin(theta - psi)


@kernel(fallback=_fk_numpy)
def _fk_loop(phi, theta, psi, l_ab, l_bc, out):
    for i in range(phi.shape[0]):
        r = l_ab[i] * math.cos(theta[i]) + l_bc[i] * math.cos(theta[i] - psi[i])
        out[i, 0] = r * math.cos(phi[i])
        out[i, 1] = r * math.sin(phi[i])
        out[i, 2] = l_ab[i] * math.sin(theta[i]) + l_bc[i] * math.sin(theta[i] - psi[i])


def _lengths(l_ab, l_bc, n):
    l_ab = np.broadcast_to(np.asarray(l_ab, dtype=float), (n,)).copy()
    l_bc = np.broadcast_to(np.asarray(l_bc, dtype=float), (n,)).copy()
    if not (np.all(np.isfinite(l_ab)) and np.all(l_ab > 0)):
        raise InvalidParameterError("l_ab", "link lengths must be positive")
    if not (np.all(np.isfinite(l_bc)) and np.all(l_bc > 0)):
        raise InvalidParameterError("l_bc", "link lengths must be positive")
    return l_ab, l_bc


def ik_many(targets, l_ab, l_bc, branch=ELBOW_UP):
    """Vectorised ``ik`` over an (N, 3) array of targets.

    Returns ``(angles, ok)``: an (N, 3) array of (phi, theta, psi) and a
    boolean reachability mask. Rows with ``ok == False`` hold clamped,
    meaningless angles rather than raising.
    """
    pts = np.ascontiguousarray(np.asarray(targets, dtype=float).reshape(-1, 3))
    n = pts.shape[0]
    if not np.all(np.isfinite(pts)):
        raise InvalidParameterError("targets", "non-finite coordinate")
    a, b = _lengths(l_ab, l_bc, n)
    out = np.empty((3, n))
    ok = np.empty(n, dtype=np.bool_)
    _ik_loop(pts[:, 0].copy(), pts[:, 1].copy(), pts[:, 2].copy(), a, b,
             _branch_sign(branch), out[0], out[1], out[2], ok)
    return out.T.copy(), ok


def fk_many(angles, l_ab, l_bc):
    ang = np.asarray(angles, dtype=float).reshape(-1, 3)
    n = ang.shape[0]
    a, b = _lengths(l_ab, l_bc, n)
    out = np.empty((n, 3))
    _fk_loop(ang[:, 0].copy(), ang[:, 1].copy(), ang[:, 2].copy(), a, b, out)
    return out


# ---------------------------------------------------------- elastic arm

def _deflection(eps):
    if eps is None:
        return ZERO_DEFLECTION
    return DeflectionVector(*(float(e) for e in eps)).validate()


def rigid_planar_fk(q, l1, l2):
    t1, t12 = q[0], q[0] + q[1]
    return (l1 * math.cos(t1) + l2 * math.cos(t12),
            l1 * math.sin(t1) + l2 * math.sin(t12))


def elastic_fk(q, eps, l1, l2):
    """Tip position of the deflected two-link chain, first order in ``eps``.

    Transform chain: rotate theta1, translate (l1 + dx1, dy1), rotate dphi1,
    rotate theta2, translate (l2 + dx2, dy2). The trailing dphi2 turns the
    tip frame only and does not move the point. sin(dphi) -> dphi,
    cos(dphi) -> 1, and dphi1 * (dx2, dy2) products are dropped. With
    ``eps`` all zero this is term-for-term the rigid planar formula.
    """
    e = _deflection(eps)
    t1, t12 = q[0], q[0] + q[1]
    c1, s1 = math.cos(t1), math.sin(t1)
    c12, s12 = math.cos(t12), math.sin(t12)
    a1, b1 = l1 + e.dx1, e.dy1
    a2, b2 = l2 + e.dx2, e.dy2 + l2 * e.dphi1
    return (a1 * c1 - b1 * s1 + a2 * c12 - b2 * s12,
            a1 * s1 + b1 * c1 + a2 * s12 + b2 * c12)


def elastic_fk_exact(q, eps, l1, l2):
    """Same transform chain with exact trigonometry and no dropped terms."""
    e = DeflectionVector(*(float(v) for v in eps))
    t1 = q[0]
    t2abs = q[0] + e.dphi1 + q[1]
    a1, b1 = l1 + e.dx1, e.dy1
    a2, b2 = l2 + e.dx2, e.dy2
    return (a1 * math.cos(t1) - b1 * math.sin(t1) + a2 * math.cos(t2abs) - b2 * math.sin(t2abs),
            a1 * math.sin(t1) + b1 * math.cos(t1) + a2 * math.sin(t2abs) + b2 * math.cos(t2abs))


def elastic_jacobian(q, eps, l1, l2):
    e = _deflection(eps)
    px, py = elastic_fk(q, e, l1, l2)
    t12 = q[0] + q[1]
    c12, s12 = math.cos(t12), math.sin(t12)
    a2, b2 = l2 + e.dx2, e.dy2 + l2 * e.dphi1
    # the whole tip swings with theta1; only the second link with theta2
    return np.array([[-py, -a2 * s12 - b2 * c12],
                     [px, a2 * c12 - b2 * s12]])


def central_difference_jacobian(q, eps, l1, l2, h=FD_STEP):
    e = _deflection(eps)
    jac = np.empty((2, 2))
    for k in range(2):
        qp, qm = list(q), list(q)
        qp[k] += h
        qm[k] -= h
        fp, fm = elastic_fk(qp, e, l1, l2), elastic_fk(qm, e, l1, l2)
        jac[0, k] = (fp[0] - fm[0]) / (2 * h)
        jac[1, k] = (fp[1] - fm[1]) / (2 * h)
    return jac


def _link_vectors(e, l1, l2):
    # first-order tip offsets of each link in its own frame
    return (l1 + e.dx1, e.dy1), (l2 + e.dx2, e.dy2 + l2 * e.dphi1)


def _seed(p, e, l1, l2, branch):
    """Closed-form solution of the rigid chain with the deflected link vectors.

    Under the first-order model the tip is R(t1) v1 + R(t1 + t2) v2 with
    constant v1, v2, i.e. a rigid arm of lengths |v1|, |v2| whose links are
    offset by the angles of v1 and v2. With zero deflection this is exactly
    the rigid closed-form IK of ``p``.
    """
    v1, v2 = _link_vectors(e, l1, l2)
    len1, len2 = math.hypot(*v1), math.hypot(*v2)
    off1, off2 = math.atan2(v1[1], v1[0]), math.atan2(v2[1], v2[0])
    try:
        theta, psi = solve_planar_2link(p[0], p[1], len1, len2, branch)
    except ReachabilityError as exc:
        raise ReachabilityError(exc.distance, exc.inner, exc.outer, tuple(p)) from None
    return [theta - off1, -psi + off1 - off2]


def elastic_ik(p, eps, l1, l2, branch=ELBOW_UP, jacobian="analytic",
               tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER, q0=None):
    """Joint vector placing the deflected tip at planar point ``p``.

    Newton iteration seeded by the closed-form solution of the equivalent
    rigid chain on the requested elbow branch (``up`` bends the elbow so
    that theta2 <= 0 when undeflected). Raises
    :class:`ConvergenceError` if the residual is still above ``tol`` after
    ``max_iter`` steps.
    """
    _check_lengths(l1, l2)
    e = _deflection(eps)
    if jacobian == "analytic":
        jac_fn = elastic_jacobian
    elif jacobian == "central":
        jac_fn = central_difference_jacobian
    else:
        raise InvalidParameterError("jacobian", f"expected 'analytic' or 'central', got {jacobian!r}")
    px, py = float(p[0]), float(p[1])
    q = list(q0) if q0 is not None else _seed((px, py), e, l1, l2, branch)

    residual = math.inf
    for _ in range(max_iter + 1):
        fx, fy = elastic_fk(q, e, l1, l2)
        rx, ry = fx - px, fy - py
        residual = math.hypot(rx, ry)
        if residual < tol:
            return JointVector(q[0], q[1])
        j = jac_fn(q, e, l1, l2)
        det = j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0]
        if det == 0.0:
            break
        q[0] -= (j[1, 1] * rx - j[0, 1] * ry) / det
        q[1] -= (-j[1, 0] * rx + j[0, 0] * ry) / det
    raise ConvergenceError(residual, max_iter)
