"""Wire format and two-party set reconciliation.

Frame layout (little endian)::

    "SSS1" | version u8 | w u8 | k u8 | r u8 | n u32 | seed u64
    | n bucket words of ceil(w/8) bytes | guard of ceil(r/8) bytes (r > 0)
    | crc32 u32 over everything before it

Injected hash tables are not part of the frame; a deserialized sketch always
uses the seeded family.
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .decode import DecodeLimits, DecodeOutcome, FailureReason, Status, decode
from .errors import BadCrc, BadMagic, BadVersion, InvalidParams, MalformedFrame, TruncatedFrame
from .hashing import HashParams
from .sketch import Sketch

MAGIC = b"SSS1"
VERSION = 1
_HEADER = struct.Struct("<4sBBBBIQ")


def _word_bytes(bits: int) -> int:
    return (bits + 7) // 8


def frame_size(params: HashParams) -> int:
    guard = _word_bytes(params.r) if params.r else 0
    return _HEADER.size + params.n * _word_bytes(params.w) + guard + 4


def serialize(s: Sketch) -> bytes:
    p = s.params
    wb = _word_bytes(p.w)
    words = s.buckets.astype("<u8").view(np.uint8).reshape(p.n, 8)[:, :wb]
    parts = [_HEADER.pack(MAGIC, VERSION, p.w, p.k, p.r, p.n, p.seed), words.tobytes()]
    if p.r:
        parts.append(s.guard.to_bytes(_word_bytes(p.r), "little"))
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


def deserialize(data: bytes) -> Sketch:
    data = bytes(data)
    if len(data) < _HEADER.size + 4:
        raise TruncatedFrame(f"frame of {len(data)} bytes is shorter than the fixed header")
    magic, version, w, k, r, n, seed = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagic(f"expected magic {MAGIC!r}, got {magic!r}")
    if version != VERSION:
        raise BadVersion(f"unsupported frame version {version}")
    try:
        params = HashParams(w=w, k=k, n=n, seed=seed, r=r)
    except InvalidParams as exc:
        raise MalformedFrame(str(exc)) from exc
    expected = frame_size(params)
    if len(data) < expected:
        raise TruncatedFrame(f"frame has {len(data)} bytes, header implies {expected}")
    if len(data) > expected:
        raise MalformedFrame(f"{len(data) - expected} trailing bytes after frame")
    (crc,) = struct.unpack_from("<I", data, expected - 4)
    if zlib.crc32(data[: expected - 4]) != crc:
        raise BadCrc("frame checksum mismatch")

    wb = _word_bytes(w)
    raw = np.frombuffer(data, dtype=np.uint8, count=n * wb, offset=_HEADER.size).reshape(n, wb)
    padded = np.zeros((n, 8), dtype=np.uint8)
    padded[:, :wb] = raw
    s = Sketch(params)
    s.buckets[:] = padded.view("<u8").reshape(n)
    if s.buckets.size and s.buckets.max() > np.uint64(params.u):
        raise MalformedFrame(f"bucket word wider than w={w} bits")
    if r:
        off = _HEADER.size + n * wb
        s.guard = int.from_bytes(data[off : off + _word_bytes(r)], "little")
        if s.guard > params.guard_mask:
            raise MalformedFrame(f"guard word wider than r={r} bits")
    return s


def suggest_buckets(expected_diff: int) -> int:
    """Bucket count for an expected symmetric difference: max(8, ceil(1.23 d))."""
    if expected_diff < 0:
        raise ValueError("expected_diff must be non-negative")
    return max(8, (123 * expected_diff + 99) // 100)


@dataclass
class ReconcileReport:
    status: Status
    difference: frozenset[int]
    bytes_on_wire: int
    reason: FailureReason | None = None
    outcome: DecodeOutcome | None = field(default=None, repr=False)

    @property
    def success(self) -> bool:
        return self.status is Status.SUCCESS


def reconcile_local(local: Iterable[int], remote: bytes, limits: DecodeLimits | None = None) -> ReconcileReport:
    """Recover the symmetric difference between ``local`` and the set behind ``remote``.

    The local set is sketched with the remote frame's parameters (including
    its seed), merged into the remote sketch and decoded. On failure the
    report carries the partial decode; retry policy is left to the caller.
    """
    merged = deserialize(remote)
    merged.merge(Sketch.from_set(merged.family, local))
    out = decode(merged, limits)
    return ReconcileReport(
        status=out.status,
        difference=out.keys,
        bytes_on_wire=len(remote),
        reason=out.reason,
        outcome=out,
    )
