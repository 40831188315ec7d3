"""Optional numba acceleration.

Kernels are written in the subset of numpy that numba compiles in nopython
mode, so the same source runs either way. Set ``CBPENTA_DISABLE_NUMBA=1``
(before import) to force the pure-numpy path.
"""

import os

_FLAG = os.environ.get("CBPENTA_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit
except ImportError:
    _njit = None

BACKEND = "numpy" if _njit is None else "numba"


def jit(func=None, **kwargs):
    """``numba.njit(cache=True)`` when available, otherwise a no-op."""
    if _njit is None:
        if func is None:
            return lambda f: f
        return func
    kwargs.setdefault("cache", True)
    if func is None:
        return _njit(**kwargs)
    return _njit(**kwargs)(func)
