"""Simple set sketches: XOR-linear set summaries decoded by breadth-first peeling."""
from ._backend import BACKEND
from .decode import (
    DecodeLimits,
    DecodeOutcome,
    DecodeTrace,
    FailureReason,
    Status,
    decode,
    decode_copy,
)
from .errors import (
    BadCrc,
    BadMagic,
    BadVersion,
    BudgetExceeded,
    FrameError,
    InvalidKey,
    InvalidParams,
    NonMonotoneBracket,
    ParamsMismatch,
    TruncatedFrame,
)
from .hashing import HashFamily, HashParams, bucket_of, guard_digest, hash_multiset, odd_multiplicity
from .reconcile import ReconcileReport, deserialize, reconcile_local, serialize, suggest_buckets
from .sketch import Sketch, from_set, initialise, merge

__all__ = [
    "BACKEND",
    "BadCrc",
    "BadMagic",
    "BadVersion",
    "BudgetExceeded",
    "DecodeLimits",
    "DecodeOutcome",
    "DecodeTrace",
    "FailureReason",
    "FrameError",
    "HashFamily",
    "HashParams",
    "InvalidKey",
    "InvalidParams",
    "NonMonotoneBracket",
    "ParamsMismatch",
    "ReconcileReport",
    "Sketch",
    "Status",
    "TruncatedFrame",
    "bucket_of",
    "decode",
    "decode_copy",
    "deserialize",
    "from_set",
    "guard_digest",
    "hash_multiset",
    "initialise",
    "merge",
    "odd_multiplicity",
    "reconcile_local",
    "serialize",
    "suggest_buckets",
]
