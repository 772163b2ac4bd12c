import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setsketch import HashParams, Sketch
from setsketch import _kernels_numpy as kn
from setsketch.oracle import InjectedHashTable
from setsketch.sampling import random_keys, trial_rng

kb = pytest.importorskip("setsketch._kernels_numba")


def _args(fam):
    return fam.kernel_args()


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), n=st.integers(1, 5000), k=st.integers(3, 6), r=st.integers(1, 64))
def test_hash_and_digest_parity(seed, n, k, r):
    fam = Sketch(HashParams(n=n, k=k, seed=seed, r=r)).family
    keys = trial_rng(seed % 1000, n).integers(1, 2**64 - 1, size=200, dtype=np.uint64, endpoint=True)
    assert np.array_equal(kn.hash_slots(keys, *_args(fam)), kb.hash_slots(keys, *_args(fam)))
    mask = np.uint64((1 << r) - 1)
    assert np.array_equal(kn.guard_digests(keys, fam._seed, k, mask), kb.guard_digests(keys, fam._seed, k, mask))


def _peel_both(s, banned=None, max_rounds=200):
    banned = np.zeros(s.n, dtype=np.bool_) if banned is None else banned
    u = np.uint64(s.params.u)
    results = []
    for mod in (kn, kb):
        a = s.buckets.copy()
        res = mod.peel(a, u, *_args(s.family), banned, max_rounds, True)
        results.append((a, res))
    return results


@pytest.mark.parametrize("trial", range(30))
def test_peel_parity_random(trial):
    rng = trial_rng(77, trial)
    n = int(rng.integers(16, 600))
    m = int(rng.integers(1, int(0.95 * n)))
    w = int(rng.choice([8, 12, 64]))
    m = min(m, 2**w - 2)
    params = HashParams(w=w, n=n, seed=int(rng.integers(0, 2**64, dtype=np.uint64)))
    s = Sketch.from_set(params, random_keys(rng, m, w))
    banned = rng.random(n) < 0.05
    (a1, r1), (a2, r2) = _peel_both(s, banned)
    assert np.array_equal(a1, a2)
    assert r1[:2] == r2[:2]
    for x, y in zip(r1[2:], r2[2:]):
        assert np.array_equal(x, y)


def test_peel_parity_injected(worked_example):
    s = Sketch.from_set(worked_example, [1, 2, 4])
    (a1, r1), (a2, r2) = _peel_both(s)
    assert np.array_equal(a1, a2) and r1[1] == r2[1] == 3
    assert np.array_equal(r1[4], r2[4])


def test_toggle_parity_with_duplicates():
    table = InjectedHashTable(HashParams(w=8, n=8), {9: (2, 2, 5)})
    keys = np.array([9, 7, 9, 200], dtype=np.uint64)
    a1 = np.zeros(8, np.uint64)
    a2 = np.zeros(8, np.uint64)
    kn.toggle_keys(a1, keys, *_args(table))
    kb.toggle_keys(a2, keys, *_args(table))
    assert np.array_equal(a1, a2)


def test_looks_pure_parity(worked_example):
    s = Sketch.from_set(worked_example, [1, 2, 4])
    u = np.uint64(s.params.u)
    for i in range(s.n):
        assert bool(kn.looks_pure(s.buckets, i, u, *_args(worked_example))) == bool(
            kb.looks_pure(s.buckets, i, u, *_args(worked_example))
        )
