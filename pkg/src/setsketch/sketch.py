"""The simple set sketch: n XOR buckets plus an optional r-bit guard word."""
from __future__ import annotations

from typing import Iterable

import numpy as np

from . import kernels
from .errors import ParamsMismatch
from .hashing import HashFamily, HashParams


class Sketch:
    """Linear summary of a key set.

    ``buckets[i]`` is the XOR of every key that hashes to ``i`` an odd number
    of times; ``guard`` is the XOR of the guard digests of the represented
    set. Both are functions of the hash family and the set alone, so toggles
    commute and ``merge`` yields the sketch of the symmetric difference.
    """

    def __init__(self, params: HashParams | HashFamily):
        self.family = params if isinstance(params, HashFamily) else HashFamily(params)
        self.buckets = np.zeros(self.family.params.n, dtype=np.uint64)
        self.guard = 0

    @property
    def params(self) -> HashParams:
        return self.family.params

    @property
    def n(self) -> int:
        return self.family.params.n

    @classmethod
    def from_set(cls, params, keys: Iterable[int]) -> Sketch:
        s = cls(params)
        s.toggle_many(keys)
        return s

    def copy(self) -> Sketch:
        s = Sketch.__new__(Sketch)
        s.family = self.family
        s.buckets = self.buckets.copy()
        s.guard = self.guard
        return s

    def toggle(self, x: int) -> None:
        """Insert ``x`` if absent, delete it if present."""
        slots = self.family.slots([x])[0]
        x = np.uint64(x)
        for b in slots:
            self.buckets[b] ^= x
        if self.params.r:
            self.guard ^= int(self.family.digests([x])[0])

    def toggle_many(self, keys: Iterable[int]) -> None:
        """Toggle each key in turn; a key listed twice cancels out."""
        if not isinstance(keys, np.ndarray):
            keys = list(keys)
        keys = self.family.check_keys(keys)
        if keys.size == 0:
            return
        kernels.toggle_keys(self.buckets, keys, *self.family.kernel_args())
        if self.params.r:
            self.guard ^= int(np.bitwise_xor.reduce(self.family.digests(keys)))

    def merge(self, other: Sketch) -> None:
        if self.family != other.family:
            raise ParamsMismatch(f"cannot merge {self.family!r} with {other.family!r}")
        self.buckets ^= other.buckets
        self.guard ^= other.guard

    def looks_pure(self, i: int) -> bool:
        """True iff bucket ``i`` is nonzero and its content hashes to ``i`` an odd number of times."""
        return bool(
            kernels.looks_pure(self.buckets, i, np.uint64(self.params.u), *self.family.kernel_args())
        )

    def is_empty(self) -> bool:
        return self.guard == 0 and not self.buckets.any()

    def storage_words(self) -> int:
        """Stored words: n buckets plus the guard word when enabled."""
        return self.n + (1 if self.params.r else 0)

    def __eq__(self, other):
        if not isinstance(other, Sketch):
            return NotImplemented
        return (
            self.family == other.family
            and self.guard == other.guard
            and np.array_equal(self.buckets, other.buckets)
        )

    __hash__ = None

    def __repr__(self):
        return f"Sketch({self.params}, nonzero={int(np.count_nonzero(self.buckets))}, guard={self.guard:#x})"


def initialise(params) -> Sketch:
    return Sketch(params)


def from_set(params, keys: Iterable[int]) -> Sketch:
    return Sketch.from_set(params, keys)


def merge(s: Sketch, other: Sketch) -> None:
    s.merge(other)
