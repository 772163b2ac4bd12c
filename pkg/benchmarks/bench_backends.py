"""Compare the numba and pure-numpy kernels on sketch construction and peeling.

Both kernel modules are imported directly, so the SETSKETCH_BACKEND setting
does not matter here. Usage:

    python benchmarks/bench_backends.py --sizes 4096 16384 65536 --load 0.75
"""
import argparse
import statistics
import time

import numpy as np

from setsketch import _kernels_numba, _kernels_numpy
from setsketch.bench import format_rows
from setsketch.decode import default_max_rounds
from setsketch.hashing import HashFamily, HashParams
from setsketch.sampling import random_keys, trial_rng

BACKENDS = {"numba": _kernels_numba, "numpy": _kernels_numpy}


def best_of(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench_size(n, load, repeats, seed):
    rng = trial_rng(seed, n)
    fam = HashFamily(HashParams(n=n, seed=int(rng.integers(0, 2**63))))
    keys = random_keys(rng, round(load * n))
    args = fam.kernel_args()
    u = np.uint64(fam.params.u)
    banned = np.zeros(n, dtype=np.bool_)

    filled = np.zeros(n, dtype=np.uint64)
    _kernels_numba.toggle_keys(filled, keys, *args)

    row = {"n": n, "m": keys.size}
    for name, mod in BACKENDS.items():
        # warm up (jit compilation for numba)
        mod.toggle_keys(np.zeros(8, dtype=np.uint64), keys[:4], args[0], 8, *args[2:])
        mod.peel(filled[:0].copy(), u, args[0], 0, *args[2:], banned[:0], 1, False)

        row[f"{name}_build_s"] = best_of(lambda: mod.toggle_keys(np.zeros(n, dtype=np.uint64), keys, *args), repeats)
        row[f"{name}_peel_s"] = best_of(
            lambda: mod.peel(filled.copy(), u, *args, banned, default_max_rounds(n), False), repeats
        )
    row["build_speedup"] = row["numpy_build_s"] / row["numba_build_s"]
    row["peel_speedup"] = row["numpy_peel_s"] / row["numba_peel_s"]
    return row


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4096, 16384, 65536])
    ap.add_argument("--load", type=float, default=0.75)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=["csv", "json"], default="csv")
    args = ap.parse_args(argv)

    rows = [bench_size(n, args.load, args.repeats, args.seed) for n in args.sizes]
    print(format_rows(rows, args.format), end="")


if __name__ == "__main__":
    main()
