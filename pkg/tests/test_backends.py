"""The compiled loops and their numpy fallbacks must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from armkit import _accel, oscillation  # noqa: F401 - registers its kernel
from armkit.kinematics import fk_many, ik_many

numba = pytest.importorskip("numba")


def _both(name):
    loop, numpy_impl = _accel.KERNELS[name]
    return numba.njit(loop), numpy_impl


def test_registry():
    assert {"_ik_loop", "_fk_loop", "_rk4_step_response"} <= set(_accel.KERNELS)
    assert _accel.backend() in ("numba", "numpy")


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_ik_kernels_agree(sign):
    compiled, vectorised = _both("_ik_loop")
    rng = np.random.default_rng(21)
    n = 5000
    x, y, z = rng.uniform(-3, 3, (3, n))
    x[:5] = y[:5] = 0.0  # on the base axis
    a, b = rng.uniform(0.1, 2, (2, n))
    outs = []
    for fn in (compiled, vectorised):
        res = [np.empty(n) for _ in range(3)] + [np.empty(n, dtype=np.bool_)]
        fn(x, y, z, a, b, sign, *res)
        outs.append(res)
    np.testing.assert_array_equal(outs[0][3], outs[1][3])
    for k in range(3):
        np.testing.assert_allclose(outs[0][k], outs[1][k], rtol=0, atol=1e-13)


def test_fk_kernels_agree():
    compiled, vectorised = _both("_fk_loop")
    rng = np.random.default_rng(22)
    n = 2000
    phi, theta, psi = rng.uniform(-np.pi, np.pi, (3, n))
    a, b = rng.uniform(0.1, 2, (2, n))
    o1, o2 = np.empty((n, 3)), np.empty((n, 3))
    compiled(phi, theta, psi, a, b, o1)
    vectorised(phi, theta, psi, a, b, o2)
    np.testing.assert_allclose(o1, o2, rtol=0, atol=1e-14)


def test_rk4_kernels_bit_identical():
    compiled, plain = _both("_rk4_step_response")
    x1, x2 = np.empty(20001), np.empty(20001)
    compiled(2 * np.pi, 0.3, 1.0, 1e-4, x1)
    plain(2 * np.pi, 0.3, 1.0, 1e-4, x2)
    assert x1.tobytes() == x2.tobytes()


def test_env_flag_selects_numpy_backend():
    code = ("from armkit import _accel, kinematics, cli;"
            "print(_accel.backend());"
            "print(kinematics._ik_loop is kinematics._ik_numpy);"
            "cli.main(['damping', '--zeta', '0.5', '--duration', '2'])")
    env = dict(os.environ, ARMKIT_DISABLE_NUMBA="1")
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                          check=True)
    lines = proc.stdout.splitlines()
    assert lines[:2] == ["numpy", "True"]
    assert "overshoot_pct: 16.3034" in lines


def test_batch_results_independent_of_backend():
    pts = np.array([[1.0, 1.0, 0.5], [0.0, 0.0, 1.2], [5.0, 0, 0]])
    code = ("import numpy as np, sys;from armkit.kinematics import ik_many;"
            f"a, ok = ik_many(np.array({pts.tolist()}), 1.0, 0.8);"
            "sys.stdout.write(repr((a.tolist(), ok.tolist())))")
    env = dict(os.environ, ARMKIT_DISABLE_NUMBA="1")
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                          check=True)
    angles, ok = eval(proc.stdout)  # noqa: S307 - our own repr
    mine, my_ok = ik_many(pts, 1.0, 0.8)
    assert ok == my_ok.tolist() == [True, True, False]
    np.testing.assert_allclose(np.array(angles)[:2], mine[:2], rtol=0, atol=1e-14)
    np.testing.assert_allclose(fk_many(mine[:2], 1.0, 0.8), pts[:2], atol=1e-12)
