"""
Metrics module for classification and recovery scores.

This module provides:
- ConfusionCounts, confusion_metrics, confusion_from_scores
- roc_auc, roc_auc_trapezoid, roc_curve, pr_auc, pr_curve
- mae_alpha, mae_g, top1_hit_rate: simulation recovery scores
- MetricRecord and CSV/YAML report helpers

Dependencies:
- numpy, scipy.stats, pyyaml
"""

from .classification import ConfusionCounts, ConfusionMetrics, confusion_from_scores, confusion_metrics
from .curves import pr_auc, pr_curve, roc_auc, roc_auc_trapezoid, roc_curve
from .recovery import mae_alpha, mae_g, top1_hit_rate
from .report import (
    METRIC_FIELDS,
    MetricRecord,
    format_table,
    read_metrics_csv,
    score_metrics,
    write_metrics_csv,
    write_metrics_yaml,
)

__all__ = [
    'ConfusionCounts',
    'ConfusionMetrics',
    'confusion_from_scores',
    'confusion_metrics',
    'pr_auc',
    'pr_curve',
    'roc_auc',
    'roc_auc_trapezoid',
    'roc_curve',
    'mae_alpha',
    'mae_g',
    'top1_hit_rate',
    'METRIC_FIELDS',
    'MetricRecord',
    'format_table',
    'read_metrics_csv',
    'score_metrics',
    'write_metrics_csv',
    'write_metrics_yaml',
]
