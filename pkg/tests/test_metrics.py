"""Tests for quality metrics: speaker distances, WER, ensembling,
calibration, and correlation statistics."""

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as scipy_stats

from sgecaug.metrics import (
    MetricError, SpeakerDistanceRecord, aggregate_wer, calibrate_per_part,
    correlation_stats, cosine_distance, distance_summary, ensemble_scores,
    filter_by_distance, wer,
)

# --- speaker distances -------------------------------------------------------

def test_cosine_distance_examples():
    assert cosine_distance([1, 0], [1, 0]) == pytest.approx(0.0)
    assert cosine_distance([1, 0], [0, 1]) == pytest.approx(1.0)
    assert cosine_distance([1, 0], [-1, 0]) == pytest.approx(2.0)
    assert cosine_distance([1, 0], [2, 0]) == pytest.approx(0.0)


def test_cosine_distance_errors():
    with pytest.raises(MetricError):
        cosine_distance([1, 0], [1, 0, 0])
    with pytest.raises(MetricError):
        cosine_distance([], [])
    with pytest.raises(MetricError):
        cosine_distance([0, 0], [1, 0])


@given(
    st.lists(st.floats(-5, 5), min_size=2, max_size=8),
    st.lists(st.floats(-5, 5), min_size=2, max_size=8),
)
@settings(max_examples=200, deadline=None)
def test_cosine_distance_bounds(a, b):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    # Subnormal components can underflow to a zero norm; skip those too.
    if sum(x * x for x in a) == 0 or sum(x * x for x in b) == 0:
        return
    d = cosine_distance(a, b)
    assert 0.0 <= d <= 2.0
    assert cosine_distance(b, a) == pytest.approx(d)


def make_records(values):
    return [SpeakerDistanceRecord(f"u{i}", v) for i, v in enumerate(values)]


def test_distance_summary_auc_is_mean():
    rng = random.Random(0)
    values = [rng.uniform(0, 2) for _ in range(500)]
    summary = distance_summary(make_records(values))
    assert summary.auc == pytest.approx(sum(values) / len(values), abs=1e-12)
    assert summary.sorted_distances == sorted(values)


def test_distance_summary_percentiles_against_numpy():
    rng = random.Random(1)
    values = [rng.uniform(0, 2) for _ in range(137)]
    summary = distance_summary(make_records(values))
    assert summary.p10 == pytest.approx(np.percentile(values, 10), abs=1e-12)
    assert summary.p50 == pytest.approx(np.percentile(values, 50), abs=1e-12)
    assert summary.p90 == pytest.approx(np.percentile(values, 90), abs=1e-12)


def test_filter_strict_threshold():
    records = make_records([0.1, 0.4, 0.39999, 0.7])
    kept, dropped = filter_by_distance(records, 0.4)
    # The boundary value 0.4 is dropped: the rule is strictly less than.
    assert kept == ["u0", "u2"]
    assert dropped == ["u1", "u3"]


def test_filter_threshold_monotone():
    rng = random.Random(2)
    records = make_records([rng.uniform(0, 2) for _ in range(200)])
    previous = set()
    for threshold in [0.0, 0.2, 0.4, 0.8, 1.6, 2.0]:
        kept = set(filter_by_distance(records, threshold)[0])
        assert previous <= kept
        previous = kept


def test_filter_threshold_range():
    with pytest.raises(MetricError):
        filter_by_distance(make_records([0.1]), 2.5)


# --- word error rate ---------------------------------------------------------

def test_wer_identity():
    b = wer(["the", "cat", "sat"], ["the", "cat", "sat"])
    assert b.wer == 0.0 and b.errors == 0


def test_wer_decomposition():
    b = wer(["the", "cat", "sat", "down"], ["a", "cat", "down"])
    # the->a sub, one of sat/down deleted: 2 errors over 4 reference tokens.
    assert (b.substitutions, b.deletions, b.insertions) == (1, 1, 0)
    assert b.wer == pytest.approx(0.5)
    b2 = wer(["cat"], ["cat", "now"])
    assert (b2.substitutions, b2.deletions, b2.insertions) == (0, 0, 1)


def test_wer_normalization():
    b = wer(["The", "cat", ",", "sat", "."], ["the", "CAT", "sat"])
    assert b.errors == 0
    assert b.reference_tokens == 3


def test_wer_can_exceed_one():
    b = wer(["a"], ["x", "y", "z"])
    assert b.wer > 1.0


def test_wer_empty_reference_raises():
    b = wer([], ["x"])
    with pytest.raises(MetricError):
        b.wer


def test_aggregate_wer_pools_counts():
    parts = [
        wer(["a", "b"], ["a", "x"]),
        wer(["c", "d", "e"], ["c", "d"]),
    ]
    total = aggregate_wer(parts)
    assert total.errors == 2
    assert total.reference_tokens == 5
    assert total.wer == pytest.approx(2 / 5)


# --- ensembling, calibration, correlation ------------------------------------

def test_ensemble_mean():
    scores = {
        1: {"a": 2.0, "b": 4.0},
        2: {"a": 4.0, "b": 4.0},
        3: {"a": 6.0, "b": 4.0},
    }
    assert ensemble_scores(scores) == {"a": 4.0, "b": 4.0}


def test_ensemble_rejects_mismatched_ids():
    with pytest.raises(MetricError):
        ensemble_scores({1: {"a": 2.0}, 2: {"b": 2.0}})


def test_calibration_recovers_linear_map():
    rng = random.Random(3)
    predicted = {f"u{i}": rng.uniform(2, 6) for i in range(40)}
    parts = {i: 1 if i < "u2" else 2 for i in predicted}
    # Both maps keep references inside [2, 6] so clamping never fires.
    reference = {
        i: (0.8 * v + 0.5 if parts[i] == 1 else 0.9 * v + 0.4)
        for i, v in predicted.items()
    }
    result = calibrate_per_part(predicted, reference, parts)
    assert result.uncalibrated_parts == []
    a1, b1 = result.coefficients[1]
    assert a1 == pytest.approx(0.8, abs=1e-9)
    assert b1 == pytest.approx(0.5, abs=1e-9)
    for i in predicted:
        assert result.calibrated[i] == pytest.approx(reference[i], abs=1e-9)


def test_calibration_clamps_to_score_range():
    predicted = {"a": 5.0, "b": 6.0, "c": 1.0}
    reference = {"a": 5.4, "b": 6.4, "c": 1.4}  # exact fit slope 1 offset 0.4
    parts = {"a": 1, "b": 1, "c": 1}
    result = calibrate_per_part(predicted, reference, parts)
    assert result.calibrated["b"] == 6.0
    assert result.calibrated["c"] == 2.0


def test_calibration_flags_small_or_degenerate_parts():
    predicted = {"a": 3.0, "b": 4.0, "c": 4.0, "d": 3.0}
    reference = {"a": 3.5, "c": 2.0, "d": 5.0}
    parts = {"a": 1, "b": 1, "c": 2, "d": 2}  # part 1 has one scored pair
    result = calibrate_per_part(predicted, reference, parts)
    assert 1 in result.uncalibrated_parts
    assert result.calibrated["a"] == 3.0
    assert result.calibrated["b"] == 4.0


def test_calibration_missing_part_label():
    with pytest.raises(MetricError, match="a"):
        calibrate_per_part({"a": 3.0}, {"a": 3.0}, {})


def test_correlation_against_scipy():
    rng = random.Random(4)
    x = {f"u{i}": rng.uniform(2, 6) for i in range(60)}
    y = {i: v + rng.gauss(0, 0.5) for i, v in x.items()}
    report = correlation_stats(x, y)
    ids = sorted(x)
    xs = [x[i] for i in ids]
    ys = [y[i] for i in ids]
    assert report.pcc == pytest.approx(scipy_stats.pearsonr(xs, ys)[0], abs=1e-12)
    assert report.src == pytest.approx(scipy_stats.spearmanr(xs, ys)[0], abs=1e-12)
    assert report.n == 60


def test_correlation_handles_ties_like_scipy():
    x = {"a": 1.0, "b": 2.0, "c": 2.0, "d": 3.0, "e": 3.0}
    y = {"a": 2.0, "b": 2.0, "c": 4.0, "d": 5.0, "e": 6.0}
    report = correlation_stats(x, y)
    xs = [x[i] for i in sorted(x)]
    ys = [y[i] for i in sorted(y)]
    assert report.src == pytest.approx(scipy_stats.spearmanr(xs, ys)[0], abs=1e-12)


def test_correlation_zero_variance_is_none():
    x = {"a": 3.0, "b": 3.0, "c": 3.0}
    y = {"a": 2.0, "b": 4.0, "c": 6.0}
    report = correlation_stats(x, y)
    assert report.pcc is None
    assert report.src is None


def test_correlation_rmse_example():
    x = {"a": 2.0, "b": 4.0}
    y = {"a": 5.0, "b": 8.0}
    report = correlation_stats(x, y)
    assert report.rmse == pytest.approx(math.sqrt(12.5), abs=1e-12)


def test_correlation_needs_two_common_ids():
    with pytest.raises(MetricError):
        correlation_stats({"a": 1.0}, {"a": 1.0, "b": 2.0})


def test_spearman_invariant_under_monotone_transform():
    rng = random.Random(5)
    x = {f"u{i}": rng.uniform(2, 6) for i in range(50)}
    y = {i: rng.uniform(2, 6) for i in x}
    base = correlation_stats(x, y).src
    warped = {i: math.exp(v) for i, v in x.items()}
    assert correlation_stats(warped, y).src == pytest.approx(base, abs=1e-12)
