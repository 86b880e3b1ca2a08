"""
Ranking metrics: ROC AUC, precision-recall AUC and the curve points behind them.

ROC AUC is the Mann-Whitney statistic P(s+ > s-) + P(s+ = s-)/2, computed from
average ranks. The trapezoid rule over the ROC curve gives the same value and
is kept as a cross-check. PR AUC uses step-wise precision: the sum over
distinct thresholds of (recall gain) x (precision at that threshold).

Dependencies:
- numpy for sweeps
- scipy.stats for tie-averaged ranks
"""

import numpy as np
from scipy import stats

from errors import DimensionError, UndefinedMetricError


def _prepare(scores, labels):
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels).reshape(-1).astype(np.int64)
    if scores.shape != labels.shape:
        raise DimensionError(f"{scores.size} scores for {labels.size} labels")
    return scores, labels


def _threshold_sweep(scores, labels):
    """Cumulative (tp, fp) after admitting each distinct score, highest first."""
    order = np.argsort(-scores, kind='mergesort')
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    tp = np.cumsum(sorted_labels == 1)
    fp = np.cumsum(sorted_labels != 1)
    # last index of every run of equal scores
    boundaries = np.r_[np.flatnonzero(np.diff(sorted_scores)), sorted_scores.size - 1]
    return tp[boundaries].astype(np.float64), fp[boundaries].astype(np.float64), sorted_scores[boundaries]


def roc_auc(scores, labels):
    """
    Area under the ROC curve.

    Raises:
        UndefinedMetricError: If only one class is present
    """
    scores, labels = _prepare(scores, labels)
    n_pos = int(np.sum(labels == 1))
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("ROC AUC needs both positive and negative samples")
    ranks = stats.rankdata(scores)
    rank_sum = ranks[labels == 1].sum()
    return float((rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def roc_curve(scores, labels):
    """
    ROC points (fpr, tpr, thresholds), starting at (0, 0).

    fpr is non-decreasing along the returned arrays.
    """
    scores, labels = _prepare(scores, labels)
    n_pos = int(np.sum(labels == 1))
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("ROC curve needs both positive and negative samples")
    tp, fp, thresholds = _threshold_sweep(scores, labels)
    fpr = np.r_[0.0, fp / n_neg]
    tpr = np.r_[0.0, tp / n_pos]
    return fpr, tpr, np.r_[np.inf, thresholds]


def roc_auc_trapezoid(scores, labels):
    """ROC AUC by trapezoid integration of roc_curve."""
    fpr, tpr, _ = roc_curve(scores, labels)
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))


def pr_curve(scores, labels):
    """
    Precision-recall points (precision, recall, thresholds), one per distinct score.

    Raises:
        UndefinedMetricError: If there are no positives
    """
    scores, labels = _prepare(scores, labels)
    n_pos = int(np.sum(labels == 1))
    if n_pos == 0:
        raise UndefinedMetricError("PR curve needs at least one positive sample")
    tp, fp, thresholds = _threshold_sweep(scores, labels)
    return tp / (tp + fp), tp / n_pos, thresholds


def pr_auc(scores, labels):
    """Area under the step-wise precision-recall curve."""
    precision, recall, _ = pr_curve(scores, labels)
    return float(np.sum(np.diff(np.r_[0.0, recall]) * precision))
