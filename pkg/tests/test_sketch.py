import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setsketch import HashParams, InvalidKey, ParamsMismatch, Sketch, decode, from_set, initialise
from setsketch.oracle import InjectedHashTable

P = HashParams(w=16, k=3, n=64, seed=77, r=32)
keysets = st.sets(st.integers(1, 2**16 - 1), max_size=40)


def test_initialise():
    s = initialise(HashParams(n=8, k=3, w=8))
    assert s.buckets.tolist() == [0] * 8
    assert s.guard == 0
    assert s.is_empty()
    assert s == initialise(HashParams(n=8, k=3, w=8))


def test_empty_decodes_to_empty():
    out = decode(initialise(P))
    assert out.success and out.keys == frozenset()


def test_toggle_involution():
    s = from_set(P, [5, 9, 1000])
    before = s.copy()
    s.toggle(31337)
    assert s != before
    s.toggle(31337)
    assert s == before


def test_toggle_worked_example_key(worked_example):
    s = Sketch(worked_example)
    s.toggle(1)
    expected = [0] * 9
    for b in (1, 3, 6):
        expected[b] = 1
    assert s.buckets.tolist() == expected


def test_duplicate_slots_cancel():
    table = InjectedHashTable(HashParams(w=8, n=8), {9: (2, 2, 5)})
    s = Sketch(table)
    s.toggle(9)
    assert s.buckets[5] == 9 and s.buckets[2] == 0
    assert s.looks_pure(5)
    assert not s.looks_pure(2)


def test_toggle_rejects_invalid():
    s = Sketch(HashParams(w=8))
    with pytest.raises(InvalidKey):
        s.toggle(0)
    with pytest.raises(InvalidKey):
        s.toggle(256)
    with pytest.raises(InvalidKey):
        from_set(HashParams(w=8), [1, 300])


def test_merge_identity_and_self_inverse():
    s = from_set(P, [1, 2, 3, 400])
    before = s.copy()
    s.merge(initialise(P))
    assert s == before
    s.merge(before)
    assert s.is_empty()


def test_merge_params_mismatch():
    s = initialise(P)
    for other in (HashParams(w=16, k=3, n=64, seed=78, r=32), HashParams(w=16, k=3, n=65, seed=77, r=32)):
        with pytest.raises(ParamsMismatch):
            s.merge(initialise(other))


@settings(max_examples=200, deadline=None)
@given(a=keysets, b=keysets)
def test_linearity(a, b):
    s = from_set(P, a)
    s.merge(from_set(P, b))
    assert s == from_set(P, a ^ b)


@settings(max_examples=50, deadline=None)
@given(keys=keysets, data=st.data())
def test_order_independence(keys, data):
    order = data.draw(st.permutations(sorted(keys)))
    stepwise = initialise(P)
    for x in order:
        stepwise.toggle(x)
    assert stepwise == from_set(P, keys)


def test_from_set_single_matches_toggle():
    s = initialise(P)
    s.toggle(4242)
    assert s == from_set(P, {4242})


def test_looks_pure_empty_and_single():
    s = initialise(P)
    assert not any(s.looks_pure(i) for i in range(P.n))
    s.toggle(999)
    for b in set(s.family.slots([999])[0].tolist()):
        if list(s.family.slots([999])[0]).count(b) % 2:
            assert s.looks_pure(b)


def test_looks_pure_deceptive_bucket(worked_example):
    s = from_set(worked_example, [1, 2, 4])
    # bucket 6 holds x^z = 5 and 6 is in h(5) = {3, 6, 8}
    assert s.buckets[6] == 5
    assert s.looks_pure(6)
    assert s.looks_pure(4)
    assert [i for i in range(9) if s.looks_pure(i)] == [4, 6]


def test_is_empty_cases(worked_example):
    s = initialise(worked_example)
    s.toggle(2)
    assert not s.is_empty()
    same = InjectedHashTable(HashParams(w=8, n=8), {1: (0, 1, 2), 2: (0, 1, 2)})
    assert not from_set(same, {1, 2}).is_empty()


def test_guard_only_state_is_not_empty():
    table = InjectedHashTable(HashParams(w=8, n=8, r=32), {1: (0, 1, 2), 2: (0, 1, 2), 3: (0, 1, 2)})
    s = from_set(table, {1, 2, 3})
    assert not s.buckets.any()
    assert s.guard != 0
    assert not s.is_empty()


class CountingBuckets(np.ndarray):
    writes = 0

    def __setitem__(self, idx, value):
        type(self).writes += 1
        super().__setitem__(idx, value)


def test_toggle_touches_k_buckets():
    for k in (3, 4, 7):
        s = initialise(HashParams(k=k, n=1000, seed=k))
        s.buckets = s.buckets.view(CountingBuckets)
        CountingBuckets.writes = 0
        s.toggle(123456789)
        assert CountingBuckets.writes == k


def test_storage_words():
    assert initialise(HashParams(n=100, r=32)).storage_words() == 101
    assert initialise(HashParams(n=100, r=0)).storage_words() == 100
