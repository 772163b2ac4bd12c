"""numba kernels for hashing, bulk toggling and peeling.

All key arithmetic stays in uint64; mixing int64 into it would silently
promote to float64 inside numba.

Per-bucket helpers take scalars only. Handing the table arrays to a helper
that runs once per bucket costs reference counting on every call, which used
to dominate decode time; the injected table is consulted only when it is
non-empty, through ``_table_row`` / ``_table_pure``.
"""
import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.core import cgutils
from numba.extending import intrinsic

_G = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_LO32 = np.uint64(0xFFFFFFFF)
_S27 = np.uint64(27)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_S32 = np.uint64(32)

DRAINED = 0
ROUND_LIMIT = 1

# Prefetch distances (in queue positions) for the peeling loop: the bucket
# itself is requested FAR items ahead, its k slots NEAR items ahead. Peeling
# is latency-bound once the bucket array outgrows L2.
_FAR = 32
_NEAR = 12


@intrinsic
def _prefetch(typingctx, arr, idx):
    """Hint the CPU to pull ``arr[idx]`` into cache (no-op semantically)."""
    sig = types.void(arr, idx)

    def codegen(context, builder, signature, args):
        aty = signature.args[0]
        ary = context.make_array(aty)(context, builder, args[0])
        ptr = cgutils.get_item_pointer(context, builder, aty, ary, [args[1]], wraparound=False)
        i32 = ir.IntType(32)
        name = "llvm.prefetch.p0" if getattr(ptr.type, "is_opaque", False) else "llvm.prefetch.p0i8"
        fn = cgutils.get_or_insert_function(builder.module, ir.FunctionType(ir.VoidType(), [ptr.type, i32, i32, i32]), name)
        # read access, high temporal locality, data cache
        builder.call(fn, [ptr, ir.Constant(i32, 0), ir.Constant(i32, 3), ir.Constant(i32, 1)])
        return context.get_dummy_value()

    return sig, codegen


@njit(cache=True, inline="always")
def _mix(seed, x, j):
    z = seed ^ (np.uint64(j + 1) * _G) ^ x
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def _mulhi(z, n):
    # n < 2**32, so neither partial product overflows
    return (((z >> _S32) * n) + (((z & _LO32) * n) >> _S32)) >> _S32


@njit(cache=True, inline="always")
def _slot(x, seed, n, j):
    return np.int64(_mulhi(_mix(seed, x, j), n))


@njit(cache=True, inline="always")
def _hashed_pure(v, i, u, seed, n, k):
    if v == 0 or v > u:
        return False
    hits = 0
    for j in range(k):
        if _slot(v, seed, n, j) == i:
            hits += 1
    return (hits & 1) == 1


@njit(cache=True)
def _table_row(x, tkeys):
    p = np.searchsorted(tkeys, x)
    if p < tkeys.size and tkeys[p] == x:
        return p
    return -1


@njit(cache=True)
def _table_pure(v, i, u, seed, n, k, tkeys, tslots):
    if v == 0 or v > u:
        return False
    p = _table_row(v, tkeys)
    if p < 0:
        return _hashed_pure(v, i, u, seed, n, k)
    hits = 0
    for j in range(k):
        if tslots[p, j] == i:
            hits += 1
    return (hits & 1) == 1


@njit(cache=True)
def hash_slots(keys, seed, n, k, tkeys, tslots):
    out = np.empty((keys.size, k), np.int64)
    nn = np.uint64(n)
    has_table = tkeys.size > 0
    for t in range(keys.size):
        x = keys[t]
        p = _table_row(x, tkeys) if has_table else -1
        for j in range(k):
            out[t, j] = tslots[p, j] if p >= 0 else _slot(x, seed, nn, j)
    return out


@njit(cache=True)
def guard_digests(keys, seed, k, mask):
    out = np.empty(keys.size, np.uint64)
    for t in range(keys.size):
        out[t] = _mix(seed, keys[t], k) & mask
    return out


@njit(cache=True)
def toggle_keys(buckets, keys, seed, n, k, tkeys, tslots):
    nn = np.uint64(n)
    has_table = tkeys.size > 0
    for t in range(keys.size):
        x = keys[t]
        p = _table_row(x, tkeys) if has_table else -1
        for j in range(k):
            b = tslots[p, j] if p >= 0 else _slot(x, seed, nn, j)
            buckets[b] ^= x


@njit(cache=True)
def looks_pure(buckets, i, u, seed, n, k, tkeys, tslots):
    nn = np.uint64(n)
    if tkeys.size > 0:
        return _table_pure(buckets[i], i, u, seed, nn, k, tkeys, tslots)
    return _hashed_pure(buckets[i], i, u, seed, nn, k)


@njit(cache=True)
def _grow_i64(a):
    b = np.empty(2 * a.size, np.int64)
    b[: a.size] = a
    return b


@njit(cache=True)
def _grow_u64(a):
    b = np.empty(2 * a.size, np.uint64)
    b[: a.size] = a
    return b


@njit(cache=True)
def peel(buckets, u, seed, n, k, tkeys, tslots, banned, max_rounds, record_queues):
    """Breadth-first peeling over ``buckets`` (mutated in place).

    Returns ``(status, rounds, step_rounds, step_buckets, step_keys,
    queue_log, queue_offsets)``; the queue log is empty unless
    ``record_queues``.
    """
    nn = np.uint64(n)
    has_table = tkeys.size > 0

    q = np.empty(max(n, 1), np.int64)
    qlen = 0
    for i in range(n):
        if banned[i]:
            continue
        v = buckets[i]
        if _table_pure(v, i, u, seed, nn, k, tkeys, tslots) if has_table else _hashed_pure(v, i, u, seed, nn, k):
            q[qlen] = i
            qlen += 1

    cap = max(16, n)
    step_rounds = np.empty(cap, np.int64)
    step_buckets = np.empty(cap, np.int64)
    step_keys = np.empty(cap, np.uint64)
    nsteps = 0

    qlog = np.empty(16 if not record_queues else max(16, n), np.int64)
    qlog_len = 0
    qoff = np.empty(16, np.int64)
    qoff[0] = 0

    xs = np.empty(k, np.int64)
    status = DRAINED
    rounds = 0
    while qlen > 0:
        if rounds >= max_rounds:
            status = ROUND_LIMIT
            break
        rounds += 1
        if record_queues:
            for t in range(qlen):
                if qlog_len == qlog.size:
                    qlog = _grow_i64(qlog)
                qlog[qlog_len] = q[t]
                qlog_len += 1
            if rounds == qoff.size:
                qoff = _grow_i64(qoff)
            qoff[rounds] = qlog_len

        qnext = np.empty(k * qlen, np.int64)
        nlen = 0
        for t in range(qlen):
            if t + _FAR < qlen:
                _prefetch(buckets, q[t + _FAR])
            if t + _NEAR < qlen and not has_table:
                y = buckets[q[t + _NEAR]]
                if y != 0:
                    for j in range(k):
                        _prefetch(buckets, _slot(y, seed, nn, j))
            i = q[t]
            x = buckets[i]
            if not (_table_pure(x, i, u, seed, nn, k, tkeys, tslots) if has_table else _hashed_pure(x, i, u, seed, nn, k)):
                continue
            p = _table_row(x, tkeys) if has_table else -1
            for j in range(k):
                b = tslots[p, j] if p >= 0 else _slot(x, seed, nn, j)
                xs[j] = b
                buckets[b] ^= x

            if nsteps == step_keys.size:
                step_rounds = _grow_i64(step_rounds)
                step_buckets = _grow_i64(step_buckets)
                step_keys = _grow_u64(step_keys)
            step_rounds[nsteps] = rounds
            step_buckets[nsteps] = i
            step_keys[nsteps] = x
            nsteps += 1

            for j in range(k):
                b = xs[j]
                if banned[b]:
                    continue
                v = buckets[b]
                if _table_pure(v, b, u, seed, nn, k, tkeys, tslots) if has_table else _hashed_pure(v, b, u, seed, nn, k):
                    qnext[nlen] = b
                    nlen += 1
        q = qnext
        qlen = nlen

    return (
        status,
        rounds,
        step_rounds[:nsteps].copy(),
        step_buckets[:nsteps].copy(),
        step_keys[:nsteps].copy(),
        qlog[:qlog_len].copy(),
        qoff[: rounds + 1].copy() if record_queues else np.zeros(1, np.int64),
    )
