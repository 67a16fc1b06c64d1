import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from armkit.errors import InvalidParameterError
from armkit.spatial import (EulerZYX, compose_zyx, extract_euler, is_rotation, rot_x, rot_y,
                            rot_z)

PI = math.pi


def matmul3(a, b):
    """Plain triple loop; independent of numpy's matmul."""
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def angle_diff(a, b):
    return abs(math.remainder(a - b, 2 * PI))


def test_elementary_rotations():
    np.testing.assert_array_equal(rot_z(0), np.eye(3))
    np.testing.assert_allclose(rot_z(PI / 2), [[0, -1, 0], [1, 0, 0], [0, 0, 1]], atol=1e-16)
    np.testing.assert_allclose(rot_x(PI), np.diag([1, -1, -1]), atol=1e-15)
    np.testing.assert_allclose(rot_y(PI / 2), [[0, 0, 1], [0, 1, 0], [-1, 0, 0]], atol=1e-16)


@pytest.mark.parametrize("fn", [rot_x, rot_y, rot_z, lambda a: compose_zyx(a, 0, 0)])
def test_non_finite_angle(fn):
    with pytest.raises(InvalidParameterError):
        fn(float("nan"))
    with pytest.raises(InvalidParameterError):
        fn(float("inf"))


def test_compose_basic():
    np.testing.assert_array_equal(compose_zyx(0, 0, 0), np.eye(3))
    np.testing.assert_allclose(compose_zyx(PI / 2, 0, 0), [[0, -1, 0], [1, 0, 0], [0, 0, 1]],
                               atol=1e-16)


def test_compose_matches_product_of_elementary_rotations():
    rng = np.random.default_rng(11)
    for phi, theta, psi in rng.uniform(-PI, PI, size=(500, 3)):
        oracle = matmul3(matmul3(rot_z(phi).tolist(), rot_y(theta).tolist()), rot_x(psi).tolist())
        np.testing.assert_allclose(compose_zyx(phi, theta, psi), oracle, rtol=0, atol=1e-14)


def test_compose_matches_scipy():
    rotation = pytest.importorskip("scipy.spatial.transform").Rotation
    angles = (0.3, -0.4, 1.1)
    np.testing.assert_allclose(compose_zyx(*angles),
                               rotation.from_euler("ZYX", angles).as_matrix(), atol=1e-14)


def test_extract_identity():
    e = extract_euler(np.eye(3))
    assert (e.phi, e.theta, e.psi, e.gimbal_lock) == (0.0, 0.0, 0.0, False)


def test_extract_round_trip_example():
    e = extract_euler(compose_zyx(0.3, -0.4, 1.1))
    assert not e.gimbal_lock
    assert e.phi == pytest.approx(0.3, abs=1e-9)
    assert e.theta == pytest.approx(-0.4, abs=1e-9)
    assert e.psi == pytest.approx(1.1, abs=1e-9)
    np.testing.assert_allclose(e.matrix(), compose_zyx(0.3, -0.4, 1.1), atol=1e-9)


@pytest.mark.parametrize("theta", [PI / 2, -PI / 2])
def test_gimbal_lock(theta):
    r = compose_zyx(0.7, theta, -0.2)
    assert r[2, 0] == pytest.approx(-math.sin(theta))
    e = extract_euler(r)
    assert e.gimbal_lock
    assert e.phi == 0.0
    assert e.theta == pytest.approx(theta, abs=1e-9)
    np.testing.assert_allclose(compose_zyx(e.phi, e.theta, e.psi), r, atol=1e-9)


def test_gimbal_lock_from_literal_matrix():
    # r31 = -1: pitch +90 deg
    r = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]])
    e = extract_euler(r)
    assert e.gimbal_lock and e.theta == pytest.approx(PI / 2)
    np.testing.assert_allclose(e.matrix(), r, atol=1e-9)


def test_r31_drift_is_clamped():
    r = compose_zyx(0.1, PI / 2, 0.2)
    r[2, 0] = -1.0 - 5e-13
    e = extract_euler(r)
    assert e.theta == pytest.approx(PI / 2)


def test_bad_matrix():
    with pytest.raises(InvalidParameterError):
        extract_euler(np.eye(2))
    bad = np.eye(3)
    bad[2, 0] = 1.5
    with pytest.raises(InvalidParameterError):
        extract_euler(bad)


def test_canonical_ranges():
    # yaw exactly pi must come back as +pi, not -pi
    e = extract_euler(compose_zyx(PI, 0.2, -PI))
    assert e.phi == pytest.approx(PI) and e.phi > 0
    assert e.psi == pytest.approx(PI) and e.psi > 0


angles = st.floats(min_value=-PI, max_value=PI, allow_nan=False)
pitch = st.floats(min_value=-PI / 2 + 0.01, max_value=PI / 2 - 0.01)


@given(angles, st.floats(min_value=-PI / 2, max_value=PI / 2), angles)
def test_compose_is_rotation(phi, theta, psi):
    assert is_rotation(compose_zyx(phi, theta, psi), tol=1e-12)


@given(angles, pitch, angles)
def test_extract_after_compose(phi, theta, psi):
    e = extract_euler(compose_zyx(phi, theta, psi))
    assert -PI < e.phi <= PI and -PI / 2 <= e.theta <= PI / 2 and -PI < e.psi <= PI
    assert angle_diff(e.phi, phi) <= 1e-9
    assert abs(e.theta - theta) <= 1e-9
    assert angle_diff(e.psi, psi) <= 1e-9


@settings(max_examples=300)
@given(angles, st.one_of(st.floats(min_value=-PI / 2, max_value=PI / 2),
                         st.sampled_from([PI / 2, -PI / 2, PI / 2 - 1e-8, -PI / 2 + 3e-9])),
       angles)
def test_compose_after_extract(phi, theta, psi):
    r = compose_zyx(phi, theta, psi)
    e = extract_euler(r)
    np.testing.assert_allclose(compose_zyx(e.phi, e.theta, e.psi), r, rtol=0, atol=1e-9)


def test_euler_tuple():
    e = EulerZYX(0.1, 0.2, 0.3)
    assert not e.gimbal_lock
    np.testing.assert_array_equal(e.matrix(), compose_zyx(0.1, 0.2, 0.3))
