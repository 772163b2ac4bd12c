"""Dispatch to the active kernel backend (see ``_backend``)."""
from ._backend import BACKEND

if BACKEND == "numba":
    from ._kernels_numba import (  # noqa: F401
        DRAINED,
        ROUND_LIMIT,
        guard_digests,
        hash_slots,
        looks_pure,
        peel,
        toggle_keys,
    )
else:
    from ._kernels_numpy import (  # noqa: F401
        DRAINED,
        ROUND_LIMIT,
        guard_digests,
        hash_slots,
        looks_pure,
        peel,
        toggle_keys,
    )
