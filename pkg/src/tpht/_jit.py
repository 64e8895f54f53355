"""Numba switch for the hot kernels.

Kernels are decorated with :func:`njit`.  When numba is missing, or the
environment variable ``TPHT_DISABLE_NUMBA`` is set to a truthy value, the
decorator is the identity and callers get the pure-Python/numpy path.
Modules that carry a separately vectorised numpy implementation pick it
with :func:`select`.
"""

import os

_FLAG = os.environ.get("TPHT_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("disabled by TPHT_DISABLE_NUMBA")
    import numba as _numba
except ImportError:
    _numba = None

USE_NUMBA = _numba is not None


def njit(*args, **kwargs):
    """``numba.njit(cache=True, nogil=True)`` or a no-op decorator."""
    if not USE_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return _numba.njit(*args, **kwargs)


def select(jitted, fallback):
    """Return ``jitted`` when numba is active, else the numpy ``fallback``."""
    return jitted if USE_NUMBA else fallback


def backend():
    return "numba" if USE_NUMBA else "numpy"
