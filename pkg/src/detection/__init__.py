"""
Detection module: spike annotation of continuous recordings.

This module provides:
- scan: sliding-window candidates above a probability threshold
- gate: channels whose importance exceeds 1.5 times the mean
- dedup: DBSCAN clustering of candidate centers, best per cluster
- annotate_recording: scan, gate and dedup end to end
- write_annotations_jsonl / read_annotations_jsonl: annotation files

Dependencies:
- numpy, scikit-learn
"""

from .types import Annotation, Candidate
from .scan import scan, score_windows, window_stack
from .gate import GATE_FACTOR, gate, passes
from .dedup import cluster_labels, dedup
from .annotate import (
    annotate_recording,
    default_eps,
    read_annotations_jsonl,
    to_annotation,
    validate_record,
    write_annotations_jsonl,
)

__all__ = [
    'Annotation',
    'Candidate',
    'scan',
    'score_windows',
    'window_stack',
    'GATE_FACTOR',
    'gate',
    'passes',
    'cluster_labels',
    'dedup',
    'annotate_recording',
    'default_eps',
    'read_annotations_jsonl',
    'to_annotation',
    'validate_record',
    'write_annotations_jsonl',
]
