import numpy as np
import pytest

from setsketch import (
    BadCrc,
    BadMagic,
    BadVersion,
    FrameError,
    HashParams,
    Sketch,
    TruncatedFrame,
    deserialize,
    from_set,
    initialise,
    reconcile_local,
    serialize,
    suggest_buckets,
)
from setsketch.reconcile import frame_size
from setsketch.sampling import random_keys, trial_rng


@pytest.mark.parametrize("w, r", [(64, 32), (8, 0), (13, 5), (1, 64), (33, 17)])
def test_frame_length(w, r):
    p = HashParams(w=w, n=37, r=r, seed=5)
    data = serialize(initialise(p))
    assert len(data) == 4 + 1 + 1 + 1 + 1 + 4 + 8 + 37 * ((w + 7) // 8) + ((r + 7) // 8 if r else 0) + 4
    assert len(data) == frame_size(p)


def test_layout_header():
    data = serialize(initialise(HashParams(w=64, k=3, n=2, seed=0x0102030405060708, r=32)))
    assert data[:4] == b"SSS1"
    assert data[4:8] == bytes([1, 64, 3, 32])
    assert data[8:12] == (2).to_bytes(4, "little")
    assert data[12:20] == (0x0102030405060708).to_bytes(8, "little")


@pytest.mark.parametrize("w, r", [(64, 32), (8, 0), (13, 5)])
def test_round_trip(w, r):
    rng = trial_rng(1, w)
    p = HashParams(w=w, n=50, r=r, seed=3)
    s = from_set(p, random_keys(rng, 40, w))
    assert deserialize(serialize(s)) == s


def test_corruption_detected():
    data = bytearray(serialize(from_set(HashParams(n=16), [1, 2, 3])))
    data[30] ^= 0x01
    with pytest.raises(BadCrc):
        deserialize(bytes(data))


def test_bad_magic_version_truncation():
    data = serialize(from_set(HashParams(n=16), [7]))
    with pytest.raises(BadMagic):
        deserialize(b"XSS1" + data[4:])
    with pytest.raises(BadVersion):
        deserialize(data[:4] + b"\x02" + data[5:])
    with pytest.raises(TruncatedFrame):
        deserialize(data[:-1])
    with pytest.raises(TruncatedFrame):
        deserialize(data[:10])
    with pytest.raises(FrameError):
        deserialize(data + b"\x00")


def test_cross_party_determinism():
    p = HashParams(n=300, seed=99)
    keys = [int(x) for x in random_keys(trial_rng(4, 0), 200)]
    assert serialize(from_set(p, keys)) == serialize(from_set(HashParams(n=300, seed=99), reversed(keys)))


def test_suggest_buckets():
    assert suggest_buckets(0) == 8
    assert suggest_buckets(100) == 123
    assert suggest_buckets(1000) == 1230
    assert suggest_buckets(1) == 8
    assert suggest_buckets(7) == 9
    with pytest.raises(ValueError):
        suggest_buckets(-1)


def test_reconcile_identical_sets():
    keys = random_keys(trial_rng(5, 0), 500)
    wire = serialize(from_set(HashParams(n=64, seed=1), keys))
    report = reconcile_local(keys, wire)
    assert report.success and report.difference == frozenset()
    assert report.bytes_on_wire == len(wire)


@pytest.mark.parametrize("trial", range(50))
def test_reconcile_single_missing_key(trial):
    rng = trial_rng(6, trial)
    keys = random_keys(rng, 1001)
    local, extra = keys[:1000], int(keys[1000])
    wire = serialize(from_set(HashParams(n=8, seed=int(rng.integers(0, 2**64, dtype=np.uint64))), keys))
    report = reconcile_local(local, wire)
    assert report.success and report.difference == {extra}


def test_reconcile_symmetry_and_union():
    rng = trial_rng(8, 0)
    pool = random_keys(rng, 2300)
    s1 = set(pool[:2000].tolist())
    s2 = set(pool[100:2100].tolist()) | set(pool[2100:2300].tolist())
    n = suggest_buckets(len(s1 ^ s2) * 2)
    p = HashParams(n=n, seed=12)
    r12 = reconcile_local(s1, serialize(from_set(p, s2)))
    r21 = reconcile_local(s2, serialize(from_set(p, s1)))
    assert r12.success and r21.success
    assert r12.difference == r21.difference == s1 ^ s2
    assert s1 | (r12.difference - s1) == s1 | s2


def test_wire_size_independent_of_set_size():
    p = HashParams(n=1230, seed=2)
    sizes = {len(serialize(from_set(p, random_keys(trial_rng(9, m), m)))) for m in (0, 10, 10**4, 10**5)}
    assert len(sizes) == 1


def test_reconcile_failure_is_reported():
    rng = trial_rng(10, 0)
    keys = random_keys(rng, 500)
    report = reconcile_local([], serialize(from_set(HashParams(n=64, seed=3), keys)))
    assert not report.success and report.reason is not None
