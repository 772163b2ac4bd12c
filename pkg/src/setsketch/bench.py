"""Experiment harness: success-rate sweeps, threshold bisection, decode timing, anomaly counts.

Trial ``t`` always draws from ``default_rng([base_seed, t])``: first the hash
seed, then the keys. The same trial stream is reused across grid points and
bisection probes, so larger loads see supersets of the keys of smaller ones.
"""
from __future__ import annotations

import csv
import io
import json
import math
import statistics
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .decode import DecodeLimits, anomalous_step_mask, decode
from .errors import NonMonotoneBracket
from .hashing import HashParams
from .oracle import count_native_anomalies_mc
from .sampling import random_keys, trial_rng
from .sketch import Sketch


def peeling_threshold(k: int) -> float:
    """c_k: min over y > 0 of y / (k (1 - e^-y)^(k-1)), by golden-section search."""
    f = lambda y: y / (k * (1.0 - math.exp(-y)) ** (k - 1))  # noqa: E731
    lo, hi = 1e-3, 10.0
    g = (math.sqrt(5) - 1) / 2
    for _ in range(200):
        a = hi - g * (hi - lo)
        b = lo + g * (hi - lo)
        if f(a) < f(b):
            hi = b
        else:
            lo = a
    return f((lo + hi) / 2)


@dataclass
class SweepSpec:
    n: int
    loads: list[float]
    k: int = 3
    trials: int = 100
    base_seed: int = 0
    w: int = 64
    r: int = 32
    max_rounds: int | None = None

    def __post_init__(self):
        if any(not 0 < c <= 1 for c in self.loads):
            raise ValueError("loads must lie in (0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


def build_trial(n, k, m, base_seed, trial, w=64, r=32):
    rng = trial_rng(base_seed, trial)
    params = HashParams(w=w, k=k, n=n, seed=int(rng.integers(0, 2**64, dtype=np.uint64)), r=r)
    keys = random_keys(rng, m, w)
    return Sketch.from_set(params, keys), keys


def run_trial(n, k, m, base_seed, trial, w=64, r=32, max_rounds=None) -> dict:
    s, keys = build_trial(n, k, m, base_seed, trial, w, r)
    out = decode(s, DecodeLimits(max_rounds))
    exact = out.success and np.array_equal(out.key_array, np.sort(keys))
    return {
        "success": out.success,
        "exact": bool(exact),
        "reason": out.reason.value if out.reason else "",
        "rounds": out.rounds_used,
        "steps": out.steps,
        "anomalous_steps": int(anomalous_step_mask(out.step_keys, keys).sum()),
    }


def run_sweep(spec: SweepSpec) -> list[dict]:
    rows = []
    for c in spec.loads:
        m = round(c * spec.n)
        res = [
            run_trial(spec.n, spec.k, m, spec.base_seed, t, spec.w, spec.r, spec.max_rounds)
            for t in range(spec.trials)
        ]
        rows.append(
            {
                "k": spec.k,
                "n": spec.n,
                "c": c,
                "m": m,
                "trials": spec.trials,
                "success_rate": sum(x["success"] for x in res) / spec.trials,
                "exact_rate": sum(x["exact"] for x in res) / spec.trials,
                "mean_rounds": statistics.fmean(x["rounds"] for x in res),
                "mean_steps": statistics.fmean(x["steps"] for x in res),
                "mean_anomalous_steps": statistics.fmean(x["anomalous_steps"] for x in res),
            }
        )
    return rows


@dataclass
class ThresholdEstimate:
    k: int
    n: int
    estimate: float
    half_width: float
    trials: int
    probes: list[tuple[float, float]] = field(default_factory=list)


def estimate_threshold(
    k: int,
    n: int,
    trials_per_probe: int = 30,
    tolerance: float = 0.01,
    base_seed: int = 0,
    lo: float = 0.5,
    hi: float = 1.0,
) -> ThresholdEstimate:
    """Bisect on the load, classifying each probe by majority success.

    Stops once the bracket is no wider than ``tolerance``; the estimate is its
    midpoint and the half-width is half the final bracket.
    """
    if tolerance < 1 / n:
        raise ValueError("tolerance must be at least 1/n")
    probes = []

    def rate(c):
        m = round(c * n)
        ok = sum(run_trial(n, k, m, base_seed, t)["success"] for t in range(trials_per_probe))
        probes.append((c, ok / trials_per_probe))
        return ok / trials_per_probe

    if rate(lo) <= 0.5 or rate(hi) > 0.5:
        raise NonMonotoneBracket(f"expected success at c={lo} and failure at c={hi}, probes {probes}")
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if rate(mid) > 0.5:
            lo = mid
        else:
            hi = mid
    return ThresholdEstimate(
        k=k,
        n=n,
        estimate=(lo + hi) / 2,
        half_width=(hi - lo) / 2,
        trials=len(probes) * trials_per_probe,
        probes=probes,
    )


def time_decode(k: int, c: float, ns: list[int], repeats: int = 5, base_seed: int = 0) -> list[dict]:
    """Best-of-``repeats`` wall time of ``decode`` (sketch construction excluded) for each n.

    Repeats are interleaved across the sizes so a transient slowdown of the
    machine hits every n alike instead of one block of samples, and the
    minimum is kept as the least noisy estimate.
    """
    warm, _ = build_trial(64, k, max(1, round(c * 64)), base_seed, 0)
    decode(warm)
    sketches = [build_trial(n, k, round(c * n), base_seed, 0)[0] for n in ns]
    best = [math.inf] * len(ns)
    for _ in range(repeats):
        for idx, s in enumerate(sketches):
            work = s.copy()
            t0 = time.perf_counter()
            out = decode(work)
            best[idx] = min(best[idx], time.perf_counter() - t0)
            # freeing the decoded key set must not land inside the timed region
            del out, work
    rows = []
    prev = None
    for n, secs in zip(ns, best):
        rows.append(
            {
                "k": k,
                "c": c,
                "n": n,
                "seconds": secs,
                "ns_per_bucket": secs / n * 1e9,
                "ratio": secs / prev if prev else float("nan"),
            }
        )
        prev = secs
    return rows


def anomaly_stats(n: int, c: float, k: int = 3, trials: int = 100, base_seed: int = 0, w: int = 64) -> dict:
    """Native-anomaly counts (n <= 64 only) and anomalous decode steps per trial."""
    m = round(c * n)
    summary = {"n": n, "c": c, "k": k, "m": m, "trials": trials, "bound": k * math.exp(c * k)}
    if n <= 64:
        counts = count_native_anomalies_mc(n, m, k, trials, base_seed, w)
        summary.update(
            native_mean=float(counts.mean()),
            native_std=float(counts.std(ddof=1)) if trials > 1 else 0.0,
            native_max=int(counts.max()) if trials else 0,
        )
    steps = [run_trial(n, k, m, base_seed, t, w)["anomalous_steps"] for t in range(trials)]
    summary.update(
        anomalous_steps_mean=statistics.fmean(steps) if steps else 0.0,
        anomalous_steps_max=max(steps) if steps else 0,
    )
    return summary


def format_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def estimate_as_rows(est: ThresholdEstimate) -> list[dict]:
    row = asdict(est)
    del row["probes"]
    return [row]
