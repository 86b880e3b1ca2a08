"""
Simulated dataset files.

A dataset is an NDLS container next to an optional truth sidecar
(<path>.truth.yaml). NDLS layout, all little-endian:
    0-3    magic "NDLS"
    4-7    version u32 (= 1)
    8-15   n u64
    16-27  d, T, p u32
    then d channel names, each u16 length + UTF-8 bytes
    then X as n*d*T f64, Z as n*d*p f64, Y as n u8

The sidecar stores the seed, the simulation config, the bank choices, beta0
and base64-encoded f64 beta vectors plus the per-sample true probabilities.
True channel weights are recomputed from X on load.

Dependencies:
- numpy for payload encoding
- pyyaml for the truth sidecar
"""

import base64
import logging
import os
import struct

import numpy as np
import yaml

from errors import CorruptionError, FormatError, VersionError
from ndl.dataset import SegmentDataset
from .generator import SimDataset, SimTruth, true_alpha

logger = logging.getLogger(__name__)

MAGIC = b'NDLS'
VERSION = 1
TRUTH_FORMAT = 'ndl-truth'
TRUTH_SUFFIX = '.truth.yaml'
_HEADER = struct.Struct('<4sIQIII')
_NAME_LEN = struct.Struct('<H')
_F64 = np.dtype('<f8')
_U8 = np.dtype('u1')


def truth_path(path):
    return str(path) + TRUTH_SUFFIX


def encode_dataset(dataset):
    n, d, T = dataset.X.shape
    p = dataset.Z.shape[2]
    parts = [_HEADER.pack(MAGIC, VERSION, n, d, T, p)]
    for name in dataset.channel_names:
        raw = name.encode('utf-8')
        parts.append(_NAME_LEN.pack(len(raw)))
        parts.append(raw)
    parts.append(np.ascontiguousarray(dataset.X, dtype=_F64).tobytes())
    parts.append(np.ascontiguousarray(dataset.Z, dtype=_F64).tobytes())
    parts.append(np.ascontiguousarray(dataset.Y, dtype=_U8).tobytes())
    return b''.join(parts)


def decode_dataset(data):
    """
    Parse NDLS bytes into a SegmentDataset.

    Raises:
        FormatError: Bad magic or version
        CorruptionError: Truncated or oversized payload
    """
    if data[:len(MAGIC)] != MAGIC:
        raise FormatError(f"Bad NDLS magic {bytes(data[:len(MAGIC)])!r}")
    if len(data) < _HEADER.size:
        raise CorruptionError(f"Truncated NDLS header: {len(data)} bytes")
    _, version, n, d, T, p = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise FormatError(f"Unsupported NDLS version {version} (expected {VERSION})")

    offset = _HEADER.size
    names = []
    try:
        for _ in range(d):
            (length,) = _NAME_LEN.unpack_from(data, offset)
            offset += _NAME_LEN.size
            raw = data[offset:offset + length]
            if len(raw) != length:
                raise CorruptionError("Truncated NDLS channel name table")
            names.append(raw.decode('utf-8'))
            offset += length
    except (struct.error, UnicodeDecodeError) as e:
        raise CorruptionError(f"Corrupt NDLS channel name table: {e}") from e

    sizes = (n * d * T, n * d * p, n)
    expected = (sizes[0] + sizes[1]) * _F64.itemsize + sizes[2]
    if len(data) - offset != expected:
        raise CorruptionError(
            f"NDLS payload holds {len(data) - offset} bytes, header requires {expected}"
        )
    X = np.frombuffer(data, dtype=_F64, count=sizes[0], offset=offset).reshape(n, d, T)
    offset += sizes[0] * _F64.itemsize
    Z = np.frombuffer(data, dtype=_F64, count=sizes[1], offset=offset).reshape(n, d, p)
    offset += sizes[1] * _F64.itemsize
    Y = np.frombuffer(data, dtype=_U8, count=n, offset=offset)
    return SegmentDataset(X=X.copy(), Z=Z.copy(), Y=Y.astype(np.int64), channel_names=tuple(names))


def write_dataset(dataset, path):
    with open(path, 'wb') as f:
        f.write(encode_dataset(dataset))
    logger.debug("Wrote dataset %s (%d samples)", path, len(dataset))


def read_dataset(path):
    with open(path, 'rb') as f:
        return decode_dataset(f.read())


def _b64(array):
    return base64.b64encode(np.ascontiguousarray(array, dtype=_F64).tobytes()).decode('ascii')


def _unb64(text, what):
    try:
        return np.frombuffer(base64.b64decode(text.encode('ascii'), validate=True), dtype=_F64).copy()
    except (ValueError, AttributeError) as e:
        raise CorruptionError(f"Truth sidecar field {what} is not base64 f64 data") from e


def write_truth(sim, path, config=None):
    """Write the truth sidecar of a simulated dataset."""
    truth = sim.truth
    document = {
        'format': TRUTH_FORMAT,
        'version': VERSION,
        'seed': int(sim.seed),
        'config': config,
        'omega_choice': [int(k) for k in truth.omega_choice],
        'beta0': _b64([truth.beta0]),
        'beta1': _b64(truth.beta1),
        'beta2': _b64(truth.beta2),
        'g_star': _b64(sim.g_star),
    }
    with open(path, 'w') as f:
        yaml.safe_dump(document, f, sort_keys=False)


def read_truth(path):
    """
    Read a truth sidecar.

    Returns:
        (SimTruth, g_star, seed, config)
    """
    with open(path, 'r') as f:
        try:
            document = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise FormatError(f"Unreadable truth sidecar {path}: {e}") from e
    if not isinstance(document, dict) or document.get('format') != TRUTH_FORMAT:
        raise FormatError(f"{path} is not a truth sidecar")
    if document.get('version') != VERSION:
        raise VersionError(f"{path} has version {document.get('version')!r}, expected {VERSION}")
    truth = SimTruth(
        omega_choice=document['omega_choice'],
        beta0=_unb64(document['beta0'], 'beta0')[0],
        beta1=_unb64(document['beta1'], 'beta1'),
        beta2=_unb64(document['beta2'], 'beta2'),
    )
    return truth, _unb64(document['g_star'], 'g_star'), int(document['seed']), document.get('config')


def save_simulation(sim, path, config=None):
    """Write the dataset container and its truth sidecar."""
    write_dataset(sim.dataset, path)
    write_truth(sim, truth_path(path), config)
    logger.info("Saved %d simulated samples to %s", len(sim), path)


def load_simulation(path):
    """
    Read a dataset and, when present, its truth.

    Returns:
        (SegmentDataset, SimDataset or None)
    """
    dataset = read_dataset(path)
    sidecar = truth_path(path)
    if not os.path.exists(sidecar):
        logger.info("No truth sidecar for %s", path)
        return dataset, None
    truth, g_values, seed, _ = read_truth(sidecar)
    if g_values.size != len(dataset):
        raise CorruptionError(f"Truth sidecar has {g_values.size} probabilities for {len(dataset)} samples")
    if (truth.T, truth.p) != (dataset.T, dataset.p):
        raise CorruptionError(f"Truth sidecar is for T={truth.T}, p={truth.p}; dataset has T={dataset.T}, p={dataset.p}")
    alpha = np.stack([true_alpha(X, truth) for X in dataset.X])
    sim = SimDataset(dataset=dataset, alpha_star=alpha,
                     g_star=g_values, truth=truth, seed=seed)
    return dataset, sim
