"""Backend selection for the hot kernels.

Set ``NEARCOLL_BACKEND=numpy`` to run every kernel as plain Python/numpy.
The default is ``numba`` when it imports cleanly.
"""

import os

BACKEND_ENV = "NEARCOLL_BACKEND"

_requested = os.environ.get(BACKEND_ENV, "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {_requested!r}")

HAS_NUMBA = False
if _requested == "numba":
    try:
        import numba

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

BACKEND = "numba" if HAS_NUMBA else "numpy"


def njit(func):
    """Compile ``func`` with numba in nopython mode, or return it untouched."""
    if HAS_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def py_func(func):
    """The uncompiled Python body of a kernel (works on either backend)."""
    return getattr(func, "py_func", func)
