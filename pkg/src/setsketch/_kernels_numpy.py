"""Pure numpy / Python kernels; same signatures as the numba ones.

Hashing and bulk toggles are vectorised. Peeling is inherently sequential
within a round, so it runs as a plain Python loop over Python ints.
"""
from collections import deque

import numpy as np

DRAINED = 0
ROUND_LIMIT = 1

_MASK = (1 << 64) - 1
_G = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def _mix_array(seed, keys, j):
    z = np.uint64(seed) ^ np.uint64(((j + 1) * _G) & _MASK) ^ keys
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def _mulhi_array(z, n):
    n = np.uint64(n)
    s32 = np.uint64(32)
    return ((z >> s32) * n + (((z & np.uint64(0xFFFFFFFF)) * n) >> s32)) >> s32


def hash_slots(keys, seed, n, k, tkeys, tslots):
    keys = np.asarray(keys, dtype=np.uint64)
    out = np.empty((keys.size, k), np.int64)
    with np.errstate(over="ignore"):
        for j in range(k):
            out[:, j] = _mulhi_array(_mix_array(seed, keys, j), n).astype(np.int64)
    if tkeys.size and keys.size:
        pos = np.searchsorted(tkeys, keys)
        pos_c = np.minimum(pos, tkeys.size - 1)
        hit = tkeys[pos_c] == keys
        out[hit] = tslots[pos_c[hit]]
    return out


def guard_digests(keys, seed, k, mask):
    keys = np.asarray(keys, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix_array(seed, keys, k) & np.uint64(mask)


def toggle_keys(buckets, keys, seed, n, k, tkeys, tslots):
    keys = np.asarray(keys, dtype=np.uint64)
    slots = hash_slots(keys, seed, n, k, tkeys, tslots)
    # ufunc.at applies repeated indices sequentially, so duplicate slots cancel
    np.bitwise_xor.at(buckets, slots.ravel(), np.repeat(keys, k))


def _mix(seed, x, j):
    z = seed ^ (((j + 1) * _G) & _MASK) ^ x
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def _scalar_hasher(seed, n, k, tkeys, tslots):
    seed = int(seed)
    table = {int(key): tuple(int(b) for b in row) for key, row in zip(tkeys, tslots)}
    ks = range(k)

    def slots(x):
        row = table.get(x)
        if row is not None:
            return row
        return tuple((_mix(seed, x, j) * n) >> 64 for j in ks)

    return slots


def looks_pure(buckets, i, u, seed, n, k, tkeys, tslots):
    v = int(buckets[i])
    if v == 0 or v > int(u):
        return False
    return _scalar_hasher(seed, n, k, tkeys, tslots)(v).count(i) % 2 == 1


def peel(buckets, u, seed, n, k, tkeys, tslots, banned, max_rounds, record_queues):
    slots = _scalar_hasher(seed, n, k, tkeys, tslots)
    u = int(u)
    a = [int(v) for v in buckets]
    banned = [bool(b) for b in banned]

    def pure(i):
        v = a[i]
        return v != 0 and v <= u and not banned[i] and slots(v).count(i) % 2 == 1

    q = deque(i for i in range(n) if pure(i))
    step_rounds, step_buckets, step_keys = [], [], []
    qlog, qoff = [], [0]
    status = DRAINED
    rounds = 0
    while q:
        if rounds >= max_rounds:
            status = ROUND_LIMIT
            break
        rounds += 1
        if record_queues:
            qlog.extend(q)
            qoff.append(len(qlog))
        qnext = deque()
        while q:
            i = q.popleft()
            if not pure(i):
                continue
            x = a[i]
            hx = slots(x)
            for b in hx:
                a[b] ^= x
            step_rounds.append(rounds)
            step_buckets.append(i)
            step_keys.append(x)
            qnext.extend(b for b in hx if pure(b))
        q = qnext

    buckets[:] = np.array(a, dtype=np.uint64)
    return (
        status,
        rounds,
        np.array(step_rounds, dtype=np.int64),
        np.array(step_buckets, dtype=np.int64),
        np.array(step_keys, dtype=np.uint64),
        np.array(qlog, dtype=np.int64),
        np.array(qoff if record_queues else [0], dtype=np.int64),
    )
