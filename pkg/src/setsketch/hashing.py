"""Seeded hash family mapping a key to its k buckets and its guard digest.

The mix is normative: two parties sharing ``(w, k, n, seed, r)`` must obtain
identical sketches. For slot ``j`` of key ``x``::

    z = seed ^ ((j + 1) * 0x9E3779B97F4A7C15) ^ x        (mod 2**64)
    z = splitmix64 finaliser(z)
    bucket = (z * n) >> 64

The guard digest is the low ``r`` bits of the finaliser output at slot ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidKey, InvalidParams

_EMPTY_KEYS = np.empty(0, dtype=np.uint64)


@dataclass(frozen=True)
class HashParams:
    w: int = 64
    k: int = 3
    n: int = 1024
    seed: int = 0
    r: int = 32

    def __post_init__(self):
        if not 1 <= self.w <= 64:
            raise InvalidParams(f"key width w must be in [1, 64], got {self.w}")
        if not 3 <= self.k <= 255:
            raise InvalidParams(f"slot count k must be in [3, 255], got {self.k}")
        if not 1 <= self.n < 2**32:
            raise InvalidParams(f"bucket count n must be in [1, 2**32), got {self.n}")
        if not 0 <= self.seed < 2**64:
            raise InvalidParams("seed must be an unsigned 64-bit value")
        if not 0 <= self.r <= 64:
            raise InvalidParams(f"guard width r must be in [0, 64], got {self.r}")

    @property
    def u(self) -> int:
        """Largest valid key, 2**w - 1."""
        return (1 << self.w) - 1

    @property
    def guard_mask(self) -> int:
        return (1 << self.r) - 1


class HashFamily:
    """The k bucket hashes and guard hash for one parameter set.

    Subclasses may pin explicit bucket sequences for chosen keys (see
    ``oracle.InjectedHashTable``); the kernels receive those as a sorted key
    array plus a matching ``(T, k)`` slot table.
    """

    def __init__(self, params: HashParams):
        self.params = params
        self._seed = np.uint64(params.seed)
        self._tkeys = _EMPTY_KEYS
        self._tslots = np.empty((0, params.k), dtype=np.int64)

    def kernel_args(self):
        p = self.params
        return self._seed, p.n, p.k, self._tkeys, self._tslots

    @property
    def overrides(self) -> dict[int, tuple[int, ...]]:
        return {int(x): tuple(int(b) for b in row) for x, row in zip(self._tkeys, self._tslots)}

    def __eq__(self, other):
        if not isinstance(other, HashFamily):
            return NotImplemented
        return self.params == other.params and self.overrides == other.overrides

    def __hash__(self):
        return hash((self.params, tuple(sorted(self.overrides.items()))))

    def __repr__(self):
        extra = f", overrides={len(self._tkeys)}" if self._tkeys.size else ""
        return f"{type(self).__name__}({self.params}{extra})"

    def check_keys(self, keys) -> np.ndarray:
        """Return ``keys`` as a uint64 array, raising InvalidKey on 0 or > u."""
        try:
            arr = np.asarray(keys, dtype=np.uint64)
        except (OverflowError, TypeError, ValueError) as exc:
            raise InvalidKey(f"keys must be unsigned {self.params.w}-bit integers") from exc
        arr = arr.reshape(-1)
        if arr.size and (arr.min() == 0 or arr.max() > np.uint64(self.params.u)):
            bad = arr[(arr == 0) | (arr > np.uint64(self.params.u))][0]
            raise InvalidKey(f"key {int(bad)} outside [1, 2**{self.params.w} - 1]")
        return arr

    def slots(self, keys) -> np.ndarray:
        """``(len(keys), k)`` array of bucket indices."""
        return kernels.hash_slots(self.check_keys(keys), *self.kernel_args())

    def digests(self, keys) -> np.ndarray:
        keys = self.check_keys(keys)
        if self.params.r == 0:
            return np.zeros(keys.size, dtype=np.uint64)
        return kernels.guard_digests(keys, self._seed, self.params.k, np.uint64(self.params.guard_mask))


def _family(source) -> HashFamily:
    return source if isinstance(source, HashFamily) else HashFamily(source)


def bucket_of(params, x: int, j: int) -> int:
    """Bucket index of slot ``j`` for key ``x``."""
    fam = _family(params)
    if not 0 <= j < fam.params.k:
        raise IndexError(f"slot index {j} outside [0, {fam.params.k})")
    return int(fam.slots([x])[0, j])


def hash_multiset(params, x: int) -> tuple[int, ...]:
    """The ordered k-sequence ``(h_1(x), ..., h_k(x))``; duplicates allowed."""
    return tuple(int(b) for b in _family(params).slots([x])[0])


def guard_digest(params, x: int) -> int:
    """r-bit digest of ``x``; always 0 when the guard is disabled (r = 0)."""
    return int(_family(params).digests([x])[0])


def odd_multiplicity(ms, i: int) -> bool:
    return list(ms).count(i) % 2 == 1
