"""
Metric records and their CSV / YAML representations.

Field names are fixed: sens, prec, spec, f1, prauc, auc, mae_alpha, mae_g.
Values that do not apply (no truth available, a single class) are written as
NA rather than 0.

Dependencies:
- numpy for NaN handling
- pyyaml for record files
"""

import csv
import logging
import math
from dataclasses import dataclass, fields
from typing import Optional

import yaml

from errors import UndefinedMetricError
from .classification import confusion_from_scores, confusion_metrics
from .curves import pr_auc, roc_auc

logger = logging.getLogger(__name__)

METRIC_FIELDS = ('sens', 'prec', 'spec', 'f1', 'prauc', 'auc', 'mae_alpha', 'mae_g')
NA = 'NA'


@dataclass(frozen=True)
class MetricRecord:
    sens: float
    prec: float
    spec: float
    f1: float
    prauc: Optional[float]
    auc: Optional[float]
    mae_alpha: Optional[float] = None
    mae_g: Optional[float] = None

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def with_recovery(self, mae_alpha=None, mae_g=None):
        values = self.as_dict()
        values.update(mae_alpha=mae_alpha, mae_g=mae_g)
        return MetricRecord(**values)


def score_metrics(scores, labels, threshold=0.5):
    """All six classification metrics for probability scores."""
    summary = confusion_metrics(confusion_from_scores(scores, labels, threshold))
    try:
        auc = roc_auc(scores, labels)
    except UndefinedMetricError as e:
        logger.warning("AUC undefined: %s", e)
        auc = None
    try:
        prauc = pr_auc(scores, labels)
    except UndefinedMetricError as e:
        logger.warning("PRAUC undefined: %s", e)
        prauc = None
    return MetricRecord(sens=summary.sensitivity, prec=summary.precision,
                        spec=summary.specificity, f1=summary.f1, prauc=prauc, auc=auc)


def format_value(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return NA
    return repr(float(value))


def parse_value(text):
    text = str(text).strip()
    return None if text in ('', NA) else float(text)


def write_metrics_csv(path, rows, leading=()):
    """
    Write metric records as CSV.

    Args:
        path: Destination path
        rows: Sequence of (leading values tuple, MetricRecord)
        leading: Names of the leading columns (e.g. 'epoch')
    """
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(list(leading) + list(METRIC_FIELDS))
        for keys, record in rows:
            values = record.as_dict()
            writer.writerow(list(keys) + [format_value(values[name]) for name in METRIC_FIELDS])


def read_metrics_csv(path):
    """Read rows written by write_metrics_csv; metric fields become floats (None for NA)."""
    with open(path, 'r', newline='') as f:
        return [{key: parse_value(value) if key in METRIC_FIELDS else value
                 for key, value in row.items()} for row in csv.DictReader(f)]


def write_metrics_yaml(path, record, **context):
    """Write one record (plus context fields) as a YAML mapping."""
    document = dict(context)
    document.update({name: (None if format_value(v) == NA else float(v))
                     for name, v in record.as_dict().items()})
    with open(path, 'w') as f:
        yaml.safe_dump(document, f, sort_keys=False)


def format_table(record):
    """Human-readable two-column table of a record."""
    lines = []
    for name in METRIC_FIELDS:
        value = getattr(record, name)
        shown = NA if format_value(value) == NA else f"{value:.4f}"
        lines.append(f"  {name:10} {shown}")
    return "\n".join(lines)
