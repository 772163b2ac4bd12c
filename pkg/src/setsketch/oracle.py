"""Ground truth for tests and experiments.

Nothing here is on the production path: explicit hash tables for hand-built
fixtures, anomaly enumeration, a plain-Python peeler that can ignore a set of
banned buckets, and an exact preimage solver for tiny key widths.
"""
from __future__ import annotations

import itertools
from math import comb
from collections import deque
from dataclasses import dataclass
from functools import reduce
from operator import xor
from pathlib import Path
from typing import Iterable

import numpy as np

from .decode import DecodeLimits, DecodeOutcome, DecodeTrace, FailureReason, RoundTrace, Status, Step
from .errors import BudgetExceeded, InvalidParams
from .hashing import HashFamily, HashParams
from .sampling import random_keys, trial_rng
from .sketch import Sketch


class InjectedHashTable(HashFamily):
    """Hash family with explicit bucket sequences for listed keys.

    Unlisted keys fall back to the seeded family for ``params``.
    """

    def __init__(self, params: HashParams, table: dict[int, Iterable[int]]):
        super().__init__(params)
        rows = {}
        for key, slots in table.items():
            key = int(self.check_keys([key])[0])
            slots = tuple(int(b) for b in slots)
            if len(slots) != params.k:
                raise InvalidParams(f"key {key}: expected {params.k} buckets, got {len(slots)}")
            if any(not 0 <= b < params.n for b in slots):
                raise InvalidParams(f"key {key}: bucket outside [0, {params.n})")
            rows[key] = slots
        order = sorted(rows)
        self._tkeys = np.array(order, dtype=np.uint64)
        self._tslots = np.array([rows[x] for x in order], dtype=np.int64).reshape(len(order), params.k)

    @classmethod
    def parse(cls, params: HashParams, text: str) -> InjectedHashTable:
        """Parse lines of the form ``key: b1,b2,...,bk`` (``#`` starts a comment)."""
        table = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                key, rest = line.split(":", 1)
                table[int(key.strip(), 0)] = [int(b, 0) for b in rest.replace(",", " ").split()]
            except ValueError as exc:
                raise InvalidParams(f"line {lineno}: expected 'key: b1,b2,...', got {line!r}") from exc
        return cls(params, table)

    @classmethod
    def from_file(cls, params: HashParams, path) -> InjectedHashTable:
        return cls.parse(params, Path(path).read_text())


@dataclass(frozen=True)
class Anomaly:
    keys: frozenset[int]
    centre: int

    def foreign_count(self, s0) -> int:
        return len(self.keys - set(s0))

    def is_native(self, s0) -> bool:
        return self.foreign_count(s0) <= 1


def _family(source) -> HashFamily:
    return source if isinstance(source, HashFamily) else HashFamily(source)


def _slot_table(fam: HashFamily, keys) -> dict[int, tuple[int, ...]]:
    keys = [int(x) for x in keys]
    if not keys:
        return {}
    return {x: tuple(int(b) for b in row) for x, row in zip(keys, fam.slots(keys))}


def _odd_buckets(slots: tuple[int, ...]) -> set[int]:
    return {b for b in set(slots) if slots.count(b) % 2}


def _incidence(fam: HashFamily, keys) -> dict[int, list[int]]:
    by_bucket: dict[int, list[int]] = {}
    for x, slots in _slot_table(fam, sorted(set(int(k) for k in keys))).items():
        for b in _odd_buckets(slots):
            by_bucket.setdefault(b, []).append(x)
    return by_bucket


def enumerate_anomalies(source, candidates, max_size: int = 5, budget: int = 10**7) -> list[Anomaly]:
    """All anomalies of size 3..max_size whose keys lie in ``candidates``.

    One entry per (key set, centre). Only keys hitting a bucket an odd number
    of times can share it as a centre, so the search runs bucket by bucket.
    """
    fam = _family(source)
    by_bucket = _incidence(fam, candidates)
    work = sum(
        sum(comb(len(members), s) for s in range(3, max_size + 1)) for members in by_bucket.values()
    )
    if work > budget:
        raise BudgetExceeded(f"anomaly search needs {work} subset checks, budget {budget}")
    found = []
    for centre in sorted(by_bucket):
        members = by_bucket[centre]
        for size in range(3, max_size + 1):
            for combo in itertools.combinations(members, size):
                if reduce(xor, combo) == 0:
                    found.append(Anomaly(frozenset(combo), centre))
    return found


def native_anomalies(anomalies: Iterable[Anomaly], s0) -> list[Anomaly]:
    s0 = set(int(x) for x in s0)
    return [a for a in anomalies if len(a.keys - s0) <= 1]


def find_native_anomalies(source, s0, budget: int = 10**6) -> list[Anomaly]:
    """Every native anomaly of ``s0`` (any size), including its foreign key if any.

    For each bucket ``i`` and each subset T of the stored keys hitting ``i``
    with |T| >= 2: XOR(T) = 0 with |T| >= 3 is an anomaly without foreign
    keys; a nonzero XOR y outside ``s0`` that also hits ``i`` completes an
    anomaly with exactly one foreign key.
    """
    fam = _family(source)
    s0 = set(int(x) for x in s0)
    u = fam.params.u
    by_bucket = _incidence(fam, s0)
    work = sum(2 ** len(members) for members in by_bucket.values())
    if work > budget:
        raise BudgetExceeded(f"native anomaly search needs {work} subsets, budget {budget}")

    found = []
    pending = []
    for centre in sorted(by_bucket):
        members = by_bucket[centre]
        for size in range(2, len(members) + 1):
            for combo in itertools.combinations(members, size):
                y = reduce(xor, combo)
                if y == 0:
                    if size >= 3:
                        found.append(Anomaly(frozenset(combo), centre))
                elif y <= u and y not in s0:
                    pending.append((combo, y, centre))
    completions = _slot_table(fam, {y for _, y, _ in pending})
    for combo, y, centre in pending:
        if completions[y].count(centre) % 2:
            found.append(Anomaly(frozenset(combo) | {y}, centre))
    return found


def anomalous_buckets(source, anomalies: Iterable[Anomaly]) -> set[int]:
    """B_A: every bucket touched by a key of any listed anomaly."""
    fam = _family(source)
    keys = set().union(*(a.keys for a in anomalies))
    return {b for slots in _slot_table(fam, keys).values() for b in slots}


def reference_peel(s: Sketch, banned=(), limits: DecodeLimits | None = None) -> DecodeOutcome:
    """Straight transcription of the peeling loop that never treats a banned bucket as pure.

    Written independently of the kernels so that, with nothing banned, it
    doubles as a cross-check on ``decode``. Mutates ``s``; always records a
    trace.
    """
    fam = s.family
    p = s.params
    banned = set(int(b) for b in banned)
    max_rounds = (limits or DecodeLimits()).rounds_for(p.n)
    a = [int(v) for v in s.buckets]
    cache: dict[int, tuple[int, ...]] = {}

    def h(x):
        if x not in cache:
            cache[x] = tuple(int(b) for b in fam.slots([x])[0])
        return cache[x]

    def looks_pure(i):
        v = a[i]
        return i not in banned and v != 0 and v <= p.u and h(v).count(i) % 2 == 1

    q = deque(i for i in range(p.n) if looks_pure(i))
    decoded: set[int] = set()
    rounds = []
    hit_limit = False
    while q:
        if len(rounds) >= max_rounds:
            hit_limit = True
            break
        queue = tuple(q)
        q_next = deque()
        steps = []
        for i in queue:
            if not looks_pure(i):
                continue
            x = a[i]
            for b in h(x):
                a[b] ^= x
            decoded ^= {x}
            steps.append(Step(i, x))
            q_next.extend(b for b in h(x) if looks_pure(b))
        rounds.append(RoundTrace(queue, tuple(steps)))
        q = q_next

    s.buckets[:] = np.array(a, dtype=np.uint64)
    all_steps = [st for rnd in rounds for st in rnd.steps]
    if p.r and all_steps:
        s.guard ^= int(np.bitwise_xor.reduce(fam.digests([st.key for st in all_steps])))

    if hit_limit:
        reason = FailureReason.ROUND_LIMIT
    elif any(a):
        reason = FailureReason.RESIDUE_NONZERO
    elif s.guard:
        reason = FailureReason.GUARD_MISMATCH
    else:
        reason = None
    return DecodeOutcome(
        status=Status.SUCCESS if reason is None else Status.FAILURE,
        key_array=np.array(sorted(decoded), dtype=np.uint64),
        reason=reason,
        rounds_used=len(rounds),
        residual=s,
        step_rounds=np.array([r for r, rnd in enumerate(rounds, 1) for _ in rnd.steps], dtype=np.int64),
        step_buckets=np.array([st.bucket for st in all_steps], dtype=np.int64),
        step_keys=np.array([st.key for st in all_steps], dtype=np.uint64),
        trace=DecodeTrace(tuple(rounds)),
    )


def _key_vector(fam: HashFamily, x: int, slots) -> int:
    p = fam.params
    v = 0
    for b in slots:
        v ^= x << (int(b) * p.w)
    return v


def exhaustive_preimage(
    s: Sketch,
    max_size: int | None = None,
    max_kernel_dim: int = 20,
    max_universe: int = 2**16,
) -> list[frozenset[int]]:
    """Every key set T over the whole universe with ``from_set(T) == s``.

    The sketch is a GF(2)-linear image of the indicator vector of T, so the
    preimages form a coset of the kernel. Gaussian elimination over all
    2**w - 1 key columns finds one solution and a kernel basis; the coset is
    then enumerated in full (optionally keeping only sets of size at most
    ``max_size``).
    """
    fam = s.family
    p = fam.params
    if p.u > max_universe:
        raise BudgetExceeded(f"universe of {p.u} keys exceeds {max_universe}")
    keys = list(range(1, p.u + 1))
    slot_rows = fam.slots(keys)
    digests = fam.digests(keys)
    guard_shift = p.n * p.w

    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []

    def reduce_vec(vec, combo):
        while vec:
            top = vec.bit_length() - 1
            if top not in pivots:
                break
            pv, pc = pivots[top]
            vec ^= pv
            combo ^= pc
        return vec, combo

    for t, x in enumerate(keys):
        vec = _key_vector(fam, x, slot_rows[t]) | (int(digests[t]) << guard_shift)
        vec, combo = reduce_vec(vec, 1 << t)
        if vec:
            pivots[vec.bit_length() - 1] = (vec, combo)
        else:
            kernel.append(combo)

    target = 0
    for b, v in enumerate(s.buckets):
        target |= int(v) << (b * p.w)
    target |= s.guard << guard_shift
    rest, particular = reduce_vec(target, 0)
    if rest:
        return []
    if len(kernel) > max_kernel_dim:
        raise BudgetExceeded(f"kernel dimension {len(kernel)} exceeds {max_kernel_dim}")

    out = []
    for choice in itertools.product((0, 1), repeat=len(kernel)):
        combo = particular
        for bit, vec in zip(choice, kernel):
            if bit:
                combo ^= vec
        if max_size is not None and combo.bit_count() > max_size:
            continue
        out.append(frozenset(keys[t] for t in range(len(keys)) if combo >> t & 1))
    return out


def count_native_anomalies_mc(n: int, m: int, k: int, trials: int, seed: int = 0, w: int = 64) -> np.ndarray:
    """Native-anomaly count for each of ``trials`` random ``m``-key sets in ``n`` buckets."""
    counts = np.zeros(trials, dtype=np.int64)
    for t in range(trials):
        rng = trial_rng(seed, t)
        params = HashParams(w=w, k=k, n=n, seed=int(rng.integers(0, 2**64, dtype=np.uint64)), r=0)
        s0 = random_keys(rng, m, w)
        counts[t] = len(find_native_anomalies(params, s0.tolist()))
    return counts
