"""
End-to-end annotation of a recording and the JSONL annotation file.

The file starts with one '#' comment line carrying a JSON header, followed
by one JSON object per annotation:
    {"center_sample": int, "center_seconds": float, "prob": float,
     "top_channels": [{"name": str, "importance": float}, ...]}

Dependencies:
- json for the record format
"""

import json
import logging

from errors import FormatError, ValidationError
from .dedup import dedup
from .gate import GATE_FACTOR, gate
from .scan import scan
from .types import Annotation

logger = logging.getLogger(__name__)

ANNOTATION_FORMAT = 'ndl-annotations'
ANNOTATION_VERSION = 1
RECORD_FIELDS = ('center_sample', 'center_seconds', 'prob', 'top_channels')


def default_eps(T, p):
    return (T + p) / 2.0


def to_annotation(candidate, fs, channel_names, p, factor=GATE_FACTOR):
    """Annotation for a gated candidate, or None when no channel passes."""
    channels = gate(candidate, len(channel_names), p, factor)
    if not channels:
        return None
    return Annotation(
        center=candidate.center,
        center_seconds=candidate.center / fs,
        prob=candidate.prob,
        top_channels=tuple((channel_names[i], float(candidate.importance[i])) for i in channels),
    )


def annotate_recording(recording, model, threshold, stride=1, eps=None, min_pts=1,
                       gate_factor=GATE_FACTOR, standardize=True):
    """
    Scan, gate and deduplicate.

    Args:
        recording: Recording
        model: NdlModel
        threshold: Probability threshold in (0, 1)
        stride: Step between windows
        eps: Clustering radius in samples; (T + p) / 2 when None
        min_pts: DBSCAN minimum neighbourhood size
        gate_factor: Multiple of the mean channel importance to exceed
        standardize: Standardize each window before scoring

    Returns:
        list of Annotation sorted by center
    """
    T, p = model.hyper.T, model.hyper.p
    eps = default_eps(T, p) if eps is None else float(eps)
    candidates = scan(recording, model, threshold, stride, standardize)
    annotations = [to_annotation(c, recording.fs, recording.channel_names, p, gate_factor)
                   for c in candidates]
    gated = [a for a in annotations if a is not None]
    result = dedup(gated, eps, min_pts)
    logger.info("%d candidates, %d after gating, %d annotations",
                len(candidates), len(gated), len(result))
    return result


def write_annotations_jsonl(path, annotations, **header):
    """Write annotations after a '#' JSON header line."""
    meta = {'format': ANNOTATION_FORMAT, 'version': ANNOTATION_VERSION}
    meta.update(header)
    with open(path, 'w') as f:
        f.write('# ' + json.dumps(meta, sort_keys=True) + '\n')
        for annotation in annotations:
            f.write(json.dumps(annotation.to_record()) + '\n')


def validate_record(record):
    """
    Check one decoded annotation record.

    Raises:
        ValidationError: Missing fields, wrong types or an invalid channel list
    """
    if not isinstance(record, dict) or set(record) != set(RECORD_FIELDS):
        raise ValidationError(f"Annotation fields must be exactly {RECORD_FIELDS}")
    if not isinstance(record['center_sample'], int) or record['center_sample'] < 0:
        raise ValidationError("center_sample must be a non-negative integer")
    for name in ('center_seconds', 'prob'):
        if not isinstance(record[name], (int, float)) or isinstance(record[name], bool):
            raise ValidationError(f"{name} must be a number")
    if not 0 < record['prob'] < 1:
        raise ValidationError(f"prob must be in (0, 1), got {record['prob']}")
    channels = record['top_channels']
    if not isinstance(channels, list) or not channels:
        raise ValidationError("top_channels must be a nonempty list")
    for entry in channels:
        if (not isinstance(entry, dict) or set(entry) != {'name', 'importance'}
                or not isinstance(entry['name'], str)
                or not isinstance(entry['importance'], (int, float))):
            raise ValidationError(f"Bad top_channels entry: {entry!r}")
    values = [entry['importance'] for entry in channels]
    if values != sorted(values, reverse=True):
        raise ValidationError("top_channels must be sorted by importance, descending")


def read_annotations_jsonl(path):
    """
    Read and validate an annotation file.

    Returns:
        (header dict, list of record dicts)

    Raises:
        FormatError: Missing or malformed header, invalid JSON
        ValidationError: A record fails validate_record, or centers are not increasing
    """
    with open(path, 'r') as f:
        lines = f.read().splitlines()
    if not lines or not lines[0].startswith('#'):
        raise FormatError(f"{path} lacks the '#' header line")
    try:
        header = json.loads(lines[0][1:])
        records = [json.loads(line) for line in lines[1:] if line.strip()]
    except json.JSONDecodeError as e:
        raise FormatError(f"{path} is not valid JSONL: {e}") from e
    if header.get('format') != ANNOTATION_FORMAT:
        raise FormatError(f"{path} is not an annotation file")
    for record in records:
        validate_record(record)
    centers = [record['center_sample'] for record in records]
    if any(b <= a for a, b in zip(centers, centers[1:])):
        raise ValidationError("Annotation centers must be strictly increasing")
    return header, records
