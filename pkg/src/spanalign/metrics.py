"""Threshold calibration, classification metrics and lexical overlap.

Scores are turned into paraphrase decisions with the rule
``score >= threshold -> positive``.  The optimal threshold for a target
metric is searched over every midpoint between adjacent distinct dev
scores plus one sentinel below the minimum and one above the maximum;
that candidate set realises every achievable confusion matrix without
floating-point edge cases on observed scores.  Ties go to the smallest
threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputValidationError

POSITIVE = "positive"
NEGATIVE = "negative"

METRIC_F1_POS = "f1_pos"
METRIC_ACCURACY = "accuracy"
TARGET_METRICS = (METRIC_F1_POS, METRIC_ACCURACY)

# Fixed default so published splits are reproducible; override per run.
DEFAULT_SPLIT_SEED = 8191


@dataclass(frozen=True)
class LabeledScore:
    """A pair's similarity score with its gold label."""

    pair_id: str
    score: float
    gold: str

    def __post_init__(self):
        if not math.isfinite(self.score):
            raise InputValidationError(
                f"pair {self.pair_id!r}: score must be finite, got {self.score!r}"
            )
        if self.gold not in (POSITIVE, NEGATIVE):
            raise InputValidationError(
                f"pair {self.pair_id!r}: gold label must be "
                f"{POSITIVE!r} or {NEGATIVE!r}, got {self.gold!r}"
            )


@dataclass(frozen=True)
class Threshold:
    value: float
    target_metric: str


@dataclass(frozen=True)
class MetricReport:
    """Confusion counts plus the derived binary classification metrics."""

    f1_pos: float
    accuracy: float
    precision_pos: float
    recall_pos: float
    recall_neg: float
    tp: int
    fp: int
    tn: int
    fn: int
    threshold: float

    def as_dict(self) -> dict:
        return {
            "f1_pos": self.f1_pos,
            "accuracy": self.accuracy,
            "precision_pos": self.precision_pos,
            "recall_pos": self.recall_pos,
            "recall_neg": self.recall_neg,
            "threshold": self.threshold,
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
        }


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def report_from_counts(tp: int, fp: int, tn: int, fn: int, threshold: float) -> MetricReport:
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    return MetricReport(
        f1_pos=_ratio(2.0 * precision * recall, precision + recall),
        accuracy=_ratio(tp + tn, tp + fp + tn + fn),
        precision_pos=precision,
        recall_pos=recall,
        recall_neg=_ratio(tn, tn + fp),
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        threshold=threshold,
    )


def evaluate(scores, threshold: Threshold) -> MetricReport:
    """Classify with ``score >= threshold`` and report standard metrics.

    F1 of the positive class is 2PR/(P+R), zero when P+R is zero.
    """
    scores = list(scores)
    if not scores:
        raise InputValidationError("cannot evaluate an empty score list")
    tp = fp = tn = fn = 0
    for item in scores:
        predicted_pos = item.score >= threshold.value
        gold_pos = item.gold == POSITIVE
        if predicted_pos and gold_pos:
            tp += 1
        elif predicted_pos:
            fp += 1
        elif gold_pos:
            fn += 1
        else:
            tn += 1
    return report_from_counts(tp, fp, tn, fn, threshold.value)


def candidate_thresholds(scores) -> list[float]:
    """Midpoints of adjacent distinct scores plus low/high sentinels."""
    values = sorted({item.score for item in scores})
    candidates = [values[0] - 1.0]
    candidates.extend(
        (lo + hi) / 2.0 for lo, hi in zip(values, values[1:])
    )
    candidates.append(values[-1] + 1.0)
    return candidates


def find_optimal_threshold(dev, metric: str = METRIC_F1_POS) -> Threshold:
    """Return the smallest threshold maximizing ``metric`` on the dev set.

    Evaluates every candidate cut point; with the >= decision rule the
    candidates cover all achievable classifications.  Requires at least
    one example of each class when tuning for F1.
    """
    dev = list(dev)
    if not dev:
        raise InputValidationError("development set is empty")
    if metric not in TARGET_METRICS:
        raise InputValidationError(
            f"unknown target metric {metric!r}; expected one of {TARGET_METRICS}"
        )
    n_pos = sum(1 for item in dev if item.gold == POSITIVE)
    if metric == METRIC_F1_POS and (n_pos == 0 or n_pos == len(dev)):
        raise InputValidationError(
            "F1 tuning needs at least one positive and one negative dev example"
        )

    # Sweep the sorted scores once instead of re-counting per candidate.
    order = sorted(dev, key=lambda item: item.score)
    scores = np.array([item.score for item in order])
    gold_pos = np.array([item.gold == POSITIVE for item in order])
    total = len(order)
    total_pos = int(gold_pos.sum())

    # cuts[k] = number of items classified negative (score < candidate);
    # candidate k sits right after the k-th distinct score group.
    distinct_mask = np.ones(total, dtype=bool)
    distinct_mask[1:] = scores[1:] != scores[:-1]
    group_ends = np.flatnonzero(np.append(distinct_mask[1:], True)) + 1
    cuts = np.concatenate(([0], group_ends))

    cum_pos = np.concatenate(([0], np.cumsum(gold_pos)))
    fn = cum_pos[cuts].astype(np.float64)
    tn = cuts - fn
    tp = total_pos - fn
    fp = (total - cuts) - tp

    if metric == METRIC_ACCURACY:
        values = (tp + tn) / total
    else:
        with np.errstate(invalid="ignore", divide="ignore"):
            precision = np.where(tp + fp > 0, tp / np.maximum(tp + fp, 1), 0.0)
            recall = np.where(tp + fn > 0, tp / np.maximum(tp + fn, 1), 0.0)
            pr = precision + recall
            values = np.where(pr > 0, 2.0 * precision * recall / np.maximum(pr, 1e-300), 0.0)

    candidates = candidate_thresholds(dev)
    best = int(np.argmax(values))  # first maximizer = smallest threshold
    return Threshold(value=candidates[best], target_metric=metric)


def stratified_dev_split(items, golds, fraction: float = 0.2, seed: int = DEFAULT_SPLIT_SEED):
    """Split ``items`` into (train, dev) preserving the class ratio.

    The dev set has round(fraction * n) members, allocated per class by
    largest remainder so each class count stays within one of exact
    proportionality.  Membership within a class is a seeded uniform
    draw; both returned lists keep the original input order.
    """
    items = list(items)
    golds = list(golds)
    if len(items) != len(golds):
        raise InputValidationError(
            f"{len(items)} items but {len(golds)} labels"
        )
    if not 0.0 < fraction < 1.0:
        raise InputValidationError(f"fraction must be in (0, 1), got {fraction}")
    classes = sorted(set(golds))
    if len(classes) < 2:
        raise InputValidationError("both classes must be present to stratify")

    by_class = {label: [i for i, g in enumerate(golds) if g == label] for label in classes}
    dev_total = round(fraction * len(items))
    targets = {label: fraction * len(by_class[label]) for label in classes}
    counts = {label: math.floor(targets[label]) for label in classes}
    leftover = dev_total - sum(counts.values())
    for label in sorted(classes, key=lambda c: targets[c] - counts[c], reverse=True):
        if leftover <= 0:
            break
        counts[label] += 1
        leftover -= 1

    rng = np.random.default_rng(seed)
    dev_indices = set()
    for label in classes:
        pool = by_class[label]
        chosen = rng.permutation(len(pool))[: counts[label]]
        dev_indices.update(pool[i] for i in chosen)

    train = [items[i] for i in range(len(items)) if i not in dev_indices]
    dev = [items[i] for i in range(len(items)) if i in dev_indices]
    return train, dev


def jaccard_unigram(text_a: str, text_b: str) -> float:
    """Unigram Jaccard overlap of two texts.

    Lowercased whitespace tokenization; two empty texts count as
    identical (1.0).
    """
    set_a = set(text_a.lower().split())
    set_b = set(text_b.lower().split())
    if not set_a and not set_b:
        return 1.0
    union = set_a | set_b
    return len(set_a & set_b) / len(union)


@dataclass(frozen=True)
class OverlapReport:
    """Mean unigram overlap per class and overall, as percentages."""

    overall: float
    positive: float | None
    negative: float | None


def overlap_report(texts_a, texts_b, golds) -> OverlapReport:
    texts_a, texts_b, golds = list(texts_a), list(texts_b), list(golds)
    if not (len(texts_a) == len(texts_b) == len(golds)) or not texts_a:
        raise InputValidationError("need equal-length, non-empty text/label lists")
    values = [jaccard_unigram(a, b) for a, b in zip(texts_a, texts_b)]

    def pct(selected):
        selected = list(selected)
        if not selected:
            return None
        return 100.0 * sum(selected) / len(selected)

    return OverlapReport(
        overall=pct(values),
        positive=pct(v for v, g in zip(values, golds) if g == POSITIVE),
        negative=pct(v for v, g in zip(values, golds) if g == NEGATIVE),
    )
