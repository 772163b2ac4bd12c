"""Per-trial random streams and random key sets for experiments."""
import numpy as np


def trial_rng(base_seed: int, *index: int) -> np.random.Generator:
    """Independent generator for ``(base_seed, *index)``; same inputs, same stream."""
    return np.random.default_rng([base_seed, *index])


def random_keys(rng: np.random.Generator, m: int, w: int = 64) -> np.ndarray:
    """``m`` distinct keys drawn uniformly from [1, 2**w - 1], in draw order."""
    u = (1 << w) - 1
    if m > u:
        raise ValueError(f"cannot draw {m} distinct {w}-bit keys")
    keys = np.empty(0, dtype=np.uint64)
    while keys.size < m:
        need = m - keys.size
        draw = rng.integers(1, u, size=need + need // 8 + 8, dtype=np.uint64, endpoint=True)
        merged = np.concatenate([keys, draw])
        _, first = np.unique(merged, return_index=True)
        keys = merged[np.sort(first)][:m]
    return keys
