"""Numba acceleration shim.

Hot kernels are written once in loop style and compiled with numba when it is
available.  Every kernel has a pure numpy/python fallback; set the environment
variable ``CURVEBENCH_NO_NUMBA=1`` (or the standard ``NUMBA_DISABLE_JIT=1``)
to force the fallback path.  ``benchmarks/kernel_speed.py`` compares the two.
"""

import os

_DISABLED_BY_ENV = (
    os.environ.get("CURVEBENCH_NO_NUMBA", "").strip() not in ("", "0")
    or os.environ.get("NUMBA_DISABLE_JIT", "").strip() not in ("", "0")
)

if _DISABLED_BY_ENV:
    HAVE_NUMBA = False
else:
    try:
        import numba  # noqa: F401
        HAVE_NUMBA = True
    except ImportError:
        HAVE_NUMBA = False

_enabled = HAVE_NUMBA


def use_numba():
    """True when jitted kernels should be dispatched."""
    return _enabled


def set_enabled(flag):
    """Toggle jitted kernels at runtime (used by the kernel benchmark)."""
    global _enabled
    _enabled = bool(flag) and HAVE_NUMBA
    return _enabled


def jit(func=None, **kw):
    """``numba.njit`` when numba is usable, identity otherwise."""
    if not HAVE_NUMBA:
        return func if func is not None else (lambda f: f)
    from numba import njit
    kw.setdefault("cache", True)
    if func is not None:
        return njit(**kw)(func)
    return njit(**kw)
