import math

import pytest

from setsketch import NonMonotoneBracket
from setsketch.bench import (
    SweepSpec,
    anomaly_stats,
    estimate_threshold,
    format_rows,
    peeling_threshold,
    run_sweep,
    time_decode,
)


def test_peeling_threshold_values():
    assert peeling_threshold(3) == pytest.approx(0.818469, abs=1e-5)
    assert peeling_threshold(4) == pytest.approx(0.772280, abs=1e-5)
    assert 1 / peeling_threshold(3) == pytest.approx(1.222, abs=5e-4)


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(n=100, loads=[0.0])
    with pytest.raises(ValueError):
        SweepSpec(n=100, loads=[1.2])
    with pytest.raises(ValueError):
        SweepSpec(n=100, loads=[0.5], trials=0)


def test_sweep_reproducible():
    spec = SweepSpec(n=2048, loads=[0.6, 0.9], trials=10, base_seed=11)
    a, b = run_sweep(spec), run_sweep(spec)
    assert format_rows(a, "csv") == format_rows(b, "csv")
    assert format_rows(a, "json") == format_rows(b, "json")


@pytest.mark.slow
def test_sweep_far_below_and_above_threshold():
    low, high = run_sweep(SweepSpec(n=2**16, loads=[0.5, 0.95], trials=100, base_seed=1))
    assert low["success_rate"] == 1.0 and low["exact_rate"] == 1.0
    assert high["success_rate"] <= 0.05


def test_sweep_monotone_small():
    rows = run_sweep(SweepSpec(n=4096, loads=[0.6, 0.7, 0.8, 0.85, 0.9], trials=40, base_seed=2))
    rates = [r["success_rate"] for r in rows]
    for lo, hi in zip(rates, rates[1:]):
        sigma = math.sqrt(max(lo * (1 - lo), hi * (1 - hi), 1 / 40) / 40)
        assert hi <= lo + 2 * sigma


@pytest.mark.slow
def test_threshold_k4_regression():
    est = estimate_threshold(4, 2**17, 30, 0.01, base_seed=0)
    assert est.estimate == 0.76953125
    assert 0.5 < est.estimate < 0.81


def test_threshold_bracket_does_not_widen():
    a = estimate_threshold(3, 2**13, 15, 0.01, base_seed=4)
    b = estimate_threshold(3, 2**14, 15, 0.01, base_seed=4)
    assert b.half_width <= a.half_width
    assert 0.7 < a.estimate < 0.9 and 0.7 < b.estimate < 0.9


def test_threshold_non_monotone_bracket():
    with pytest.raises(NonMonotoneBracket):
        estimate_threshold(3, 1024, 5, 0.01, lo=0.95, hi=1.0)


def test_threshold_tolerance_floor():
    with pytest.raises(ValueError):
        estimate_threshold(3, 64, 5, 0.001)


def test_time_decode_rows():
    rows = time_decode(3, 0.75, [1024, 2048], repeats=3)
    assert [r["n"] for r in rows] == [1024, 2048]
    assert math.isnan(rows[0]["ratio"]) and rows[1]["ratio"] > 0


def test_time_decode_trivial():
    rows = time_decode(3, 0.0, [1], repeats=1)
    assert rows[0]["seconds"] < 0.1


def test_anomaly_stats_empty_load():
    s = anomaly_stats(32, 0.0, 3, 20)
    assert s["native_mean"] == 0 and s["native_max"] == 0
    assert s["anomalous_steps_mean"] == 0


def test_anomaly_stats_large_n_skips_enumeration():
    s = anomaly_stats(4096, 0.5, 3, 5)
    assert "native_mean" not in s
    assert s["bound"] == pytest.approx(3 * math.exp(1.5))
