"""Optional numba acceleration.

Set ``CTCSIM_DISABLE_NUMBA=1`` to run every kernel as plain numpy/Python.
The flag is read once, at import time.
"""
import logging
import os

_DISABLE = os.environ.get("CTCSIM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLE:
        raise ImportError("disabled by CTCSIM_DISABLE_NUMBA")
    import numba

    logging.getLogger("numba").setLevel(logging.WARNING)
    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False


def maybe_njit(func):
    """Compile ``func`` with ``numba.njit`` when available, else return it unchanged.

    The undecorated function stays reachable as ``.py_func`` in both cases, so
    benchmarks can time the two paths side by side.
    """
    if HAS_NUMBA:
        return numba.njit(cache=True)(func)
    func.py_func = func
    return func
