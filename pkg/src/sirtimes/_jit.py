"""Optional numba acceleration.

The numerical kernels in :mod:`sirtimes.kernels` are written as plain scalar
Python that numba can compile in nopython mode. ``maybe_jit`` wraps them with
``numba.njit`` when numba is importable and the environment variable
``SIRTIMES_NO_JIT`` is unset (or "0"); otherwise the undecorated Python
function runs as-is. Both paths execute the same source, so results agree and
the package works without numba installed.
"""

import os

__all__ = ["JIT_ENABLED", "maybe_jit"]


def _jit_requested() -> bool:
    flag = os.environ.get("SIRTIMES_NO_JIT", "0").strip().lower()
    return flag in ("", "0", "false", "no")


JIT_ENABLED = False

if _jit_requested():
    try:
        import numba

        JIT_ENABLED = True
    except ImportError:
        numba = None
else:
    numba = None


def maybe_jit(func):
    """Decorate *func* with numba.njit when acceleration is enabled."""
    if JIT_ENABLED:
        return numba.njit(cache=True, nogil=True)(func)
    return func
