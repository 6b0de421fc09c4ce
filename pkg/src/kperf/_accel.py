"""JIT switch for the numeric kernels.

Set ``KPERF_DISABLE_NUMBA=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``) to run
the pure-numpy paths.  When numba cannot be imported the numpy paths are used
silently.
"""

import os

_FLAG_VALUES = ("1", "true", "yes", "on")


def _env_disabled() -> bool:
    for name in ("KPERF_DISABLE_NUMBA", "NUMBA_DISABLE_JIT"):
        if os.getenv(name, "").strip().lower() in _FLAG_VALUES:
            return True
    return False


try:
    import numba  # noqa: F401
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False
    njit = None

USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def jit(func):
    """Compile ``func`` with ``njit(cache=True)`` when available, else return it."""
    if not HAVE_NUMBA:
        return func
    return njit(cache=True)(func)
