"""Objective quality metrics: speaker distance summaries and filtering,
WER with S/D/I decomposition, score ensembling/calibration, and
correlation statistics."""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from typing import Optional, Sequence

from .alignment import align_tokens

SCORE_MIN = 2.0
SCORE_MAX = 6.0

_PUNCT = set(string.punctuation)


class MetricError(ValueError):
    pass


# --- speaker distances -------------------------------------------------------

@dataclass(frozen=True)
class SpeakerDistanceRecord:
    id: str
    distance: float


@dataclass
class DistanceSummary:
    sorted_distances: list[float]
    auc: float
    p10: float
    p50: float
    p90: float


def cosine_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """1 - cosine similarity; 0.0 is identical direction, 2.0 opposite."""
    if len(a) != len(b):
        raise MetricError(f"dimension mismatch: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise MetricError("empty vectors")
    dot = sum(x * y for x, y in zip(a, b))
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(y * y for y in b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise MetricError("zero vector has no direction")
    return min(2.0, max(0.0, 1.0 - dot / (norm_a * norm_b)))


def _quantile(sorted_values: list[float], q: float) -> float:
    # Linear interpolation between order statistics.
    n = len(sorted_values)
    if n == 1:
        return sorted_values[0]
    pos = q * (n - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, n - 1)
    frac = pos - lo
    return sorted_values[lo] * (1 - frac) + sorted_values[hi] * frac


def distance_summary(records: Sequence[SpeakerDistanceRecord]) -> DistanceSummary:
    """Summarize distances. The AUC is the area under the sorted-distance
    (quantile) curve on a unit x-axis, which equals the mean distance:
    lower means distances cluster at the similar end."""
    if not records:
        raise MetricError("no distance records")
    values = sorted(r.distance for r in records)
    return DistanceSummary(
        sorted_distances=values,
        auc=sum(values) / len(values),
        p10=_quantile(values, 0.10),
        p50=_quantile(values, 0.50),
        p90=_quantile(values, 0.90),
    )


def filter_by_distance(
    records: Sequence[SpeakerDistanceRecord], threshold: float
) -> tuple[list[str], list[str]]:
    """Split ids into (kept, dropped) with the strict rule distance < threshold."""
    if not (0.0 <= threshold <= 2.0):
        raise MetricError(f"threshold {threshold} outside [0,2]")
    kept, dropped = [], []
    for record in records:
        (kept if record.distance < threshold else dropped).append(record.id)
    return kept, dropped


# --- word error rate ---------------------------------------------------------

@dataclass
class WerBreakdown:
    substitutions: int
    deletions: int
    insertions: int
    reference_tokens: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    def _rate(self, count: int) -> float:
        if self.reference_tokens == 0:
            raise MetricError("empty reference: rates undefined")
        return count / self.reference_tokens

    @property
    def wer(self) -> float:
        return self._rate(self.errors)

    @property
    def sub_rate(self) -> float:
        return self._rate(self.substitutions)

    @property
    def del_rate(self) -> float:
        return self._rate(self.deletions)

    @property
    def ins_rate(self) -> float:
        return self._rate(self.insertions)


def normalize_for_wer(tokens: Sequence[str]) -> list[str]:
    """Case folding plus removal of standalone punctuation tokens."""
    out = []
    for token in tokens:
        if token and all(ch in _PUNCT for ch in token):
            continue
        out.append(token.lower())
    return out


def wer(reference: Sequence[str], hypothesis: Sequence[str]) -> WerBreakdown:
    ref = normalize_for_wer(reference)
    hyp = normalize_for_wer(hypothesis)
    script = align_tokens(ref, hyp, fold_case=False)
    subs, dels, ins = script.counts()
    return WerBreakdown(subs, dels, ins, len(ref))


def aggregate_wer(breakdowns: Sequence[WerBreakdown]) -> WerBreakdown:
    """Corpus-level WER: pooled counts over pooled reference length."""
    return WerBreakdown(
        substitutions=sum(b.substitutions for b in breakdowns),
        deletions=sum(b.deletions for b in breakdowns),
        insertions=sum(b.insertions for b in breakdowns),
        reference_tokens=sum(b.reference_tokens for b in breakdowns),
    )


# --- score ensembling, calibration, correlation ------------------------------

def ensemble_scores(
    per_seed_scores: dict[int | str, dict[str, float]]
) -> dict[str, float]:
    """Arithmetic mean per id over seeds; all seeds must share the id set."""
    if not per_seed_scores:
        raise MetricError("no seed score maps")
    seeds = sorted(per_seed_scores, key=str)
    ids = set(per_seed_scores[seeds[0]])
    for seed in seeds[1:]:
        if set(per_seed_scores[seed]) != ids:
            raise MetricError(f"seed {seed!r} covers a different id set")
    return {
        i: sum(per_seed_scores[s][i] for s in seeds) / len(seeds)
        for i in sorted(ids)
    }


@dataclass
class CalibrationResult:
    calibrated: dict[str, float]
    coefficients: dict[int, tuple[float, float]]  # part -> (slope, intercept)
    uncalibrated_parts: list[int]


def calibrate_per_part(
    predicted: dict[str, float],
    reference: dict[str, float],
    parts: dict[str, int],
    clamp: tuple[float, float] = (SCORE_MIN, SCORE_MAX),
) -> CalibrationResult:
    """Least-squares linear fit of reference on predicted, per part.

    Parts with fewer than two scored pairs (or zero predictor variance)
    are left uncalibrated and flagged. Calibrated values are clamped to
    the assessment score range.
    """
    by_part: dict[int, list[str]] = {}
    for i in predicted:
        if i not in parts:
            raise MetricError(f"id {i!r} has no part label")
        by_part.setdefault(parts[i], []).append(i)

    lo, hi = clamp
    calibrated: dict[str, float] = {}
    coefficients: dict[int, tuple[float, float]] = {}
    uncalibrated: list[int] = []
    for part in sorted(by_part):
        ids = by_part[part]
        pairs = [(predicted[i], reference[i]) for i in ids if i in reference]
        fit = None
        if len(pairs) >= 2:
            xs = [x for x, _ in pairs]
            ys = [y for _, y in pairs]
            mx = sum(xs) / len(xs)
            my = sum(ys) / len(ys)
            var = sum((x - mx) ** 2 for x in xs)
            if var > 0:
                slope = sum((x - mx) * (y - my) for x, y in pairs) / var
                fit = (slope, my - slope * mx)
        if fit is None:
            uncalibrated.append(part)
            for i in ids:
                calibrated[i] = predicted[i]
        else:
            coefficients[part] = fit
            a, b = fit
            for i in ids:
                calibrated[i] = min(hi, max(lo, a * predicted[i] + b))
    return CalibrationResult(calibrated, coefficients, uncalibrated)


@dataclass
class CorrelationReport:
    pcc: Optional[float]
    src: Optional[float]
    rmse: float
    n: int
    scatter: list[tuple[str, float, float]]  # (id, x, y)


def _pearson(xs: list[float], ys: list[float]) -> Optional[float]:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        return None
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)


def _average_ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1  # 1-based average rank over the tie block
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def correlation_stats(
    x: dict[str, float], y: dict[str, float]
) -> CorrelationReport:
    """Pearson, Spearman (average-rank ties), and RMSE over common ids."""
    common = sorted(set(x) & set(y))
    if len(common) < 2:
        raise MetricError(f"need >= 2 common ids, got {len(common)}")
    xs = [x[i] for i in common]
    ys = [y[i] for i in common]
    pcc = _pearson(xs, ys)
    src = _pearson(_average_ranks(xs), _average_ranks(ys))
    rmse = math.sqrt(sum((a - b) ** 2 for a, b in zip(xs, ys)) / len(common))
    return CorrelationReport(
        pcc=pcc,
        src=src,
        rmse=rmse,
        n=len(common),
        scatter=[(i, x[i], y[i]) for i in common],
    )
