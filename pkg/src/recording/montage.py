"""
Montage transforms: bipolar pair montages and the common average reference.

Montage files are YAML with a `name` and either `pairs` (a list of
"ANODE,CATHODE" strings) or `common_average: true`. The bundled montages
live next to this module and can be referenced by name ("tcp",
"common_average").

Channel lookup accepts the exact recording name or its bare electrode label,
so "FP1" resolves to a raw channel called "EEG FP1-REF".

Dependencies:
- numpy for re-referencing
- pyyaml for montage files
"""

import logging
import os
import re

import numpy as np
import yaml

from errors import MontageError, ValidationError
from .types import COMMON_AVERAGE, MontageSpec

logger = logging.getLogger(__name__)

MONTAGE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'montages')

_PREFIX = re.compile(r'^(EEG|MEG)\s+', re.IGNORECASE)
_SUFFIX = re.compile(r'-(REF|LE|AR|AVG)$', re.IGNORECASE)


def electrode_label(name):
    """Strip acquisition prefixes/suffixes: 'EEG FP1-REF' -> 'FP1'."""
    label = _SUFFIX.sub('', _PREFIX.sub('', name.strip()))
    return label.upper()


def bundled_montages():
    """Names of the montage specs shipped with the package."""
    return sorted(os.path.splitext(f)[0] for f in os.listdir(MONTAGE_DIR) if f.endswith('.yaml'))


def parse_montage(document, source='<montage>'):
    """
    Build a MontageSpec from a parsed YAML mapping.

    Raises:
        ValidationError: On missing or malformed fields
    """
    if not isinstance(document, dict) or 'name' not in document:
        raise ValidationError(f"{source}: montage needs a 'name'")
    unknown = set(document) - {'name', 'pairs', 'common_average'}
    if unknown:
        raise ValidationError(f"{source}: unknown montage keys {sorted(unknown)}")

    if document.get('common_average') or document.get('pairs') == COMMON_AVERAGE:
        return MontageSpec(name=str(document['name']), common_average=True)

    pairs = []
    for entry in document.get('pairs') or []:
        parts = [part.strip() for part in str(entry).split(',')]
        if len(parts) != 2 or not all(parts):
            raise ValidationError(f"{source}: pair {entry!r} is not 'ANODE,CATHODE'")
        pairs.append((parts[0], parts[1]))
    return MontageSpec(name=str(document['name']), pairs=tuple(pairs))


def load_montage(name_or_path):
    """
    Load a montage by bundled name or from a YAML file.

    Args:
        name_or_path: "tcp", "common_average" or a file path
    """
    path = name_or_path
    if not os.path.exists(path):
        path = os.path.join(MONTAGE_DIR, f"{str(name_or_path).lower()}.yaml")
        if not os.path.exists(path):
            raise MontageError(
                f"Unknown montage {name_or_path!r}; bundled: {', '.join(bundled_montages())}"
            )
    with open(path, 'r') as f:
        document = yaml.safe_load(f)
    return parse_montage(document, source=path)


def _resolve(name, channel_names):
    if name in channel_names:
        return channel_names.index(name)
    wanted = electrode_label(name)
    matches = [i for i, channel in enumerate(channel_names) if electrode_label(channel) == wanted]
    if len(matches) == 1:
        return matches[0]
    if not matches:
        raise MontageError(f"Montage channel {name!r} not found in recording")
    raise MontageError(f"Montage channel {name!r} is ambiguous in recording")


def apply_montage(recording, montage):
    """
    Re-reference a recording.

    Pair montages produce one channel per pair, anode minus cathode, named
    "ANODE-CATHODE". The common average subtracts the per-sample channel mean.

    Args:
        recording: Source Recording
        montage: MontageSpec

    Returns:
        Recording: Re-referenced recording with the same sampling rate
    """
    samples = recording.samples
    if montage.common_average:
        referenced = samples - samples.mean(axis=0, keepdims=True)
        names = [f"{electrode_label(name)}-AVG" for name in recording.channel_names]
        if len(set(names)) != len(names):
            names = list(recording.channel_names)
        logger.debug("Applied common average to %d channels", recording.n_channels)
        return recording.with_samples(referenced, names)

    names = list(recording.channel_names)
    rows = []
    labels = []
    for anode, cathode in montage.pairs:
        a = _resolve(anode, names)
        c = _resolve(cathode, names)
        rows.append(samples[a] - samples[c])
        labels.append(f"{anode}-{cathode}")
    logger.debug("Applied montage %s: %d -> %d channels", montage.name, len(names), len(rows))
    return recording.with_samples(np.vstack(rows), labels)
