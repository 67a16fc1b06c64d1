"""Kernel backend selection.

Hot loops are written once as plain Python over numpy arrays and compiled
with :func:`numba.njit` when numba is importable. Setting the environment
variable ``ARMKIT_DISABLE_NUMBA=1`` (before import) forces the numpy path,
which is also used automatically when numba is missing.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FALSY = ("", "0", "false", "no", "off")

NUMBA_REQUESTED = os.environ.get("ARMKIT_DISABLE_NUMBA", "0").strip().lower() in _FALSY
USE_NUMBA = NUMBA_REQUESTED and numba is not None

# name -> (loop kernel, numpy fallback); the benchmark compiles both sides itself
KERNELS = {}


def backend():
    return "numba" if USE_NUMBA else "numpy"


def kernel(fallback=None):
    """Register a loop kernel, returning the implementation for the active backend.

    ``fallback`` is a vectorised numpy equivalent. When it is omitted the
    uncompiled loop itself is the fallback (used for inherently sequential
    recurrences such as fixed-step integrators).
    """

    def wrap(fn):
        numpy_impl = fallback if fallback is not None else fn
        KERNELS[fn.__name__] = (fn, numpy_impl)
        if USE_NUMBA:
            return numba.njit(cache=True, nogil=True)(fn)
        return numpy_impl

    return wrap
