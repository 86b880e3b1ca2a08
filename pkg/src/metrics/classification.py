"""
Threshold metrics from confusion counts.

Zero denominators yield 0 and the metric name is added to `undefined`.

Dependencies:
- numpy for thresholding
"""

from dataclasses import dataclass, field
from typing import FrozenSet

import numpy as np

from errors import DimensionError, ValidationError


@dataclass(frozen=True)
class ConfusionCounts:
    """True/false positive/negative counts."""

    TP: int
    FP: int
    TN: int
    FN: int

    def __post_init__(self):
        for name in ('TP', 'FP', 'TN', 'FN'):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValidationError(f"{name} must be a non-negative count, got {value}")
            object.__setattr__(self, name, int(value))

    @property
    def total(self):
        return self.TP + self.FP + self.TN + self.FN


@dataclass(frozen=True)
class ConfusionMetrics:
    sensitivity: float
    precision: float
    specificity: float
    f1: float
    undefined: FrozenSet[str] = field(default_factory=frozenset)


def _ratio(numerator, denominator, name, undefined):
    if denominator == 0:
        undefined.add(name)
        return 0.0
    return numerator / denominator


def confusion_metrics(counts):
    """
    Sensitivity, precision, specificity and F1 of confusion counts.

    Args:
        counts: ConfusionCounts

    Returns:
        ConfusionMetrics
    """
    undefined = set()
    sensitivity = _ratio(counts.TP, counts.TP + counts.FN, 'sensitivity', undefined)
    precision = _ratio(counts.TP, counts.TP + counts.FP, 'precision', undefined)
    specificity = _ratio(counts.TN, counts.TN + counts.FP, 'specificity', undefined)
    if precision + sensitivity == 0:
        f1 = 0.0
    else:
        f1 = 2 * precision * sensitivity / (precision + sensitivity)
    return ConfusionMetrics(sensitivity, precision, specificity, f1, frozenset(undefined))


def confusion_from_scores(scores, labels, threshold=0.5):
    """Counts with the rule score >= threshold -> positive."""
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels).reshape(-1)
    if scores.shape != labels.shape:
        raise DimensionError(f"{scores.size} scores for {labels.size} labels")
    predicted = scores >= threshold
    actual = labels == 1
    return ConfusionCounts(
        TP=int(np.sum(predicted & actual)),
        FP=int(np.sum(predicted & ~actual)),
        TN=int(np.sum(~predicted & ~actual)),
        FN=int(np.sum(~predicted & actual)),
    )
