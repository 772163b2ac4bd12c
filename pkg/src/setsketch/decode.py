"""Breadth-first peeling decoder.

Each round drains a FIFO multiset of buckets that looked pure when they were
queued, re-checking purity on pop. Buckets that become pure during a round
wait for the next one, which lets the neighbours of a deceptive (anomalous)
bucket be cleared before it is revisited.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .sketch import Sketch


class Status(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"


class FailureReason(enum.Enum):
    RESIDUE_NONZERO = "residue_nonzero"
    ROUND_LIMIT = "round_limit"
    GUARD_MISMATCH = "guard_mismatch"


@dataclass(frozen=True)
class DecodeLimits:
    max_rounds: int | None = None

    def __post_init__(self):
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be positive")

    def rounds_for(self, n: int) -> int:
        if self.max_rounds is not None:
            return self.max_rounds
        return default_max_rounds(n)


def default_max_rounds(n: int) -> int:
    return 8 * math.ceil(math.log2(n + 2)) + 32


@dataclass(frozen=True)
class Step:
    bucket: int
    key: int


@dataclass(frozen=True)
class RoundTrace:
    queue: tuple[int, ...]
    steps: tuple[Step, ...]

    @property
    def step_buckets(self) -> tuple[int, ...]:
        return tuple(s.bucket for s in self.steps)


@dataclass(frozen=True)
class DecodeTrace:
    rounds: tuple[RoundTrace, ...]

    def steps(self) -> list[Step]:
        return [s for rnd in self.rounds for s in rnd.steps]

    def anomalous_flags(self, s0) -> list[list[bool]]:
        """Per round, whether each step added a key to the represented set."""
        present = set(int(x) for x in s0)
        flags = []
        for rnd in self.rounds:
            row = []
            for s in rnd.steps:
                row.append(s.key not in present)
                present ^= {s.key}
            flags.append(row)
        return flags

    def represented_sets(self, s0) -> list[frozenset[int]]:
        """Represented set at the start of each round, then after the last."""
        cur = set(int(x) for x in s0)
        out = [frozenset(cur)]
        for rnd in self.rounds:
            for s in rnd.steps:
                cur ^= {s.key}
            out.append(frozenset(cur))
        return out

    def format(self) -> str:
        lines = []
        for r, rnd in enumerate(self.rounds, 1):
            steps = ", ".join(f"{s.bucket}:{s.key:#x}" for s in rnd.steps)
            lines.append(f"round {r}: queue={list(rnd.queue)} steps=[{steps}]")
        return "\n".join(lines)


@dataclass
class DecodeOutcome:
    status: Status
    key_array: np.ndarray = field(repr=False)
    reason: FailureReason | None
    rounds_used: int
    residual: Sketch = field(repr=False)
    step_rounds: np.ndarray = field(repr=False)
    step_buckets: np.ndarray = field(repr=False)
    step_keys: np.ndarray = field(repr=False)
    trace: DecodeTrace | None = field(default=None, repr=False)

    @property
    def success(self) -> bool:
        return self.status is Status.SUCCESS

    @property
    def steps(self) -> int:
        return int(self.step_keys.size)

    @cached_property
    def keys(self) -> frozenset[int]:
        """Decoded keys as a set; built on first use, ``key_array`` is the sorted form."""
        return frozenset(self.key_array.tolist())

    def anomalous_steps(self, s0) -> int:
        return int(anomalous_step_mask(self.step_keys, s0).sum())


def _odd_keys(step_keys: np.ndarray) -> np.ndarray:
    uniq, counts = np.unique(step_keys, return_counts=True)
    return uniq[counts % 2 == 1]


def anomalous_step_mask(step_keys: np.ndarray, s0) -> np.ndarray:
    """Boolean mask over steps: True where the detected key was not stored.

    A key is stored before its t-th toggle iff it was in ``s0`` XOR it has
    been toggled an odd number of times already.
    """
    step_keys = np.asarray(step_keys, dtype=np.uint64)
    if step_keys.size == 0:
        return np.zeros(0, dtype=bool)
    s0 = np.unique(np.asarray(list(s0) if not isinstance(s0, np.ndarray) else s0, dtype=np.uint64))
    order = np.argsort(step_keys, kind="stable")
    sk = step_keys[order]
    starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]])
    group_len = np.diff(np.r_[starts, sk.size])
    prior = np.arange(sk.size) - np.repeat(starts, group_len)
    seen_before = np.empty(sk.size, dtype=np.int64)
    seen_before[order] = prior
    pos = np.minimum(np.searchsorted(s0, step_keys), max(s0.size - 1, 0))
    native = (s0[pos] == step_keys) if s0.size else np.zeros(step_keys.size, dtype=bool)
    stored = native ^ (seen_before % 2 == 1)
    return ~stored


def _run(s: Sketch, limits: DecodeLimits | None, trace: bool) -> DecodeOutcome:
    limits = limits or DecodeLimits()
    p = s.params
    banned_mask = np.zeros(p.n, dtype=np.bool_)
    status, rounds, s_rounds, s_buckets, s_keys, qlog, qoff = kernels.peel(
        s.buckets,
        np.uint64(p.u),
        *s.family.kernel_args(),
        banned_mask,
        limits.rounds_for(p.n),
        trace,
    )
    if p.r and s_keys.size:
        s.guard ^= int(np.bitwise_xor.reduce(s.family.digests(s_keys)))

    if status == kernels.ROUND_LIMIT:
        reason = FailureReason.ROUND_LIMIT
    elif s.buckets.any():
        reason = FailureReason.RESIDUE_NONZERO
    elif s.guard:
        reason = FailureReason.GUARD_MISMATCH
    else:
        reason = None

    out_trace = None
    if trace:
        rows = []
        for r in range(int(rounds)):
            mask = s_rounds == r + 1
            rows.append(
                RoundTrace(
                    queue=tuple(int(b) for b in qlog[qoff[r] : qoff[r + 1]]),
                    steps=tuple(Step(int(b), int(x)) for b, x in zip(s_buckets[mask], s_keys[mask])),
                )
            )
        out_trace = DecodeTrace(tuple(rows))

    return DecodeOutcome(
        status=Status.SUCCESS if reason is None else Status.FAILURE,
        key_array=_odd_keys(s_keys),
        reason=reason,
        rounds_used=int(rounds),
        residual=s,
        step_rounds=s_rounds,
        step_buckets=s_buckets,
        step_keys=s_keys,
        trace=out_trace,
    )


def decode(s: Sketch, limits: DecodeLimits | None = None, trace: bool = False) -> DecodeOutcome:
    """Peel ``s`` in place toward the empty sketch.

    On success ``keys`` is the decoded set and ``s`` is left empty. On
    failure ``keys`` is the partial decode and ``s`` (also returned as
    ``residual``) holds what could not be peeled. Failures are reported,
    never raised.
    """
    return _run(s, limits, trace)


def decode_copy(s: Sketch, limits: DecodeLimits | None = None, trace: bool = False) -> DecodeOutcome:
    return _run(s.copy(), limits, trace)
