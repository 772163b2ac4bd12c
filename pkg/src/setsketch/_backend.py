"""Kernel backend selection.

``SETSKETCH_BACKEND=numpy`` forces the pure-numpy/Python kernels; the default
is numba when it imports, numpy otherwise.
"""
import os

_requested = os.environ.get("SETSKETCH_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"SETSKETCH_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover - numba is a declared dependency
        BACKEND = "numpy"
    else:
        BACKEND = "numba"
else:
    BACKEND = "numpy"
