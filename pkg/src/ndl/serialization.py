"""
Model files: a YAML metadata sidecar plus a binary tensor blob.

For a base path `runs/model` the pair is `runs/model.yaml` and
`runs/model.tensors`. Each blob record is:
    u16 LE name length, UTF-8 name, u8 rank, rank x u32 LE dims,
    f32 LE row-major data

Training checkpoints reuse the format with extra tensors (optimizer moments,
best-so-far parameters) and extra sidecar fields.

Dependencies:
- numpy and torch for tensor conversion
- pyyaml for the sidecar
"""

import hashlib
import logging
import os
import struct

import numpy as np
import torch
import yaml

from errors import CorruptionError, FormatError, VersionError
from .network import NdlHyper, NdlModel

logger = logging.getLogger(__name__)

MODEL_FORMAT = 'ndl-model'
MODEL_VERSION = 1
SIDECAR_SUFFIX = '.yaml'
BLOB_SUFFIX = '.tensors'

_NAME_LEN = struct.Struct('<H')
_RANK = struct.Struct('<B')
_DIM = struct.Struct('<I')
_DATA_DTYPE = np.dtype('<f4')


def model_paths(path):
    """(sidecar, blob) paths for a base path; a trailing .yaml/.tensors is ignored."""
    base = str(path)
    for suffix in (SIDECAR_SUFFIX, BLOB_SUFFIX):
        if base.endswith(suffix):
            base = base[:-len(suffix)]
    return base + SIDECAR_SUFFIX, base + BLOB_SUFFIX


def config_digest(config):
    """Stable SHA-256 of a configuration mapping (or None)."""
    if config is None:
        return None
    text = yaml.safe_dump(config, sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def encode_tensors(tensors):
    """Serialize an ordered mapping name -> array into blob bytes."""
    parts = []
    for name, value in tensors.items():
        array = np.ascontiguousarray(
            value.detach().cpu().numpy() if isinstance(value, torch.Tensor) else value,
            dtype=_DATA_DTYPE,
        )
        raw_name = name.encode('utf-8')
        parts.append(_NAME_LEN.pack(len(raw_name)))
        parts.append(raw_name)
        parts.append(_RANK.pack(array.ndim))
        parts.extend(_DIM.pack(dim) for dim in array.shape)
        parts.append(array.tobytes())
    return b''.join(parts)


def decode_tensors(data):
    """Parse blob bytes into an ordered dict name -> float32 numpy array."""
    tensors = {}
    offset = 0
    while offset < len(data):
        try:
            (length,) = _NAME_LEN.unpack_from(data, offset)
            offset += _NAME_LEN.size
            name = data[offset:offset + length].decode('utf-8')
            if len(name.encode('utf-8')) != length:
                raise CorruptionError("Truncated tensor name")
            offset += length
            (rank,) = _RANK.unpack_from(data, offset)
            offset += _RANK.size
            shape = tuple(_DIM.unpack_from(data, offset + i * _DIM.size)[0] for i in range(rank))
            offset += rank * _DIM.size
        except (struct.error, UnicodeDecodeError) as e:
            raise CorruptionError(f"Corrupt tensor record at byte {offset}: {e}") from e
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * _DATA_DTYPE.itemsize
        if offset + nbytes > len(data):
            raise CorruptionError(f"Tensor {name!r} payload truncated")
        tensors[name] = np.frombuffer(data, dtype=_DATA_DTYPE, count=count,
                                      offset=offset).reshape(shape).copy()
        offset += nbytes
    return tensors


def write_bundle(path, metadata, tensors):
    """Write sidecar metadata and tensor blob for a base path."""
    sidecar, blob = model_paths(path)
    parent = os.path.dirname(os.path.abspath(sidecar))
    os.makedirs(parent, exist_ok=True)
    with open(blob, 'wb') as f:
        f.write(encode_tensors(tensors))
    with open(sidecar, 'w') as f:
        yaml.safe_dump(metadata, f, sort_keys=False)
    logger.debug("Wrote %s and %s (%d tensors)", sidecar, blob, len(tensors))


def read_bundle(path, expected_format=MODEL_FORMAT):
    """
    Read (metadata, tensors) for a base path.

    Raises:
        FormatError: Sidecar is not a model sidecar
        VersionError: Sidecar version differs from MODEL_VERSION
        CorruptionError: Blob cannot be parsed
    """
    sidecar, blob = model_paths(path)
    with open(sidecar, 'r') as f:
        try:
            metadata = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise FormatError(f"Unreadable model sidecar {sidecar}: {e}") from e
    if not isinstance(metadata, dict) or metadata.get('format') != expected_format:
        raise FormatError(f"{sidecar} is not a {expected_format} sidecar")
    if metadata.get('version') != MODEL_VERSION:
        raise VersionError(
            f"{sidecar} has version {metadata.get('version')!r}, expected {MODEL_VERSION}"
        )
    with open(blob, 'rb') as f:
        tensors = decode_tensors(f.read())
    return metadata, tensors


def model_metadata(model, training_config=None, **extra):
    metadata = {
        'format': MODEL_FORMAT,
        'version': MODEL_VERSION,
        'hyper': model.hyper.to_dict(),
        'training_config_digest': config_digest(training_config),
    }
    metadata.update(extra)
    return metadata


def model_from_tensors(hyper, tensors, prefix=''):
    """Rebuild an NdlModel from blob tensors (optionally under a name prefix)."""
    model = NdlModel(hyper)
    state = model.state_dict()
    missing = [name for name in state if prefix + name not in tensors]
    if missing:
        raise CorruptionError(f"Model blob is missing tensors: {missing}")
    loaded = {}
    for name, current in state.items():
        array = tensors[prefix + name]
        if tuple(array.shape) != tuple(current.shape):
            raise CorruptionError(
                f"Tensor {name!r} has shape {array.shape}, architecture needs {tuple(current.shape)}"
            )
        loaded[name] = torch.from_numpy(array)
    model.load_state_dict(loaded)
    return model


def save_model(model, path, training_config=None):
    """
    Save a model as a sidecar + blob pair.

    Args:
        model: NdlModel (float32 parameters are stored bit-exactly)
        path: Base path
        training_config: Optional mapping whose digest is recorded
    """
    write_bundle(path, model_metadata(model, training_config), model.state_dict())
    logger.info("Saved model to %s", model_paths(path)[0])


def load_model(path):
    """Load a model saved by save_model (or a training checkpoint)."""
    metadata, tensors = read_bundle(path)
    hyper = NdlHyper.from_dict(metadata.get('hyper') or {})
    model = model_from_tensors(hyper, tensors)
    logger.info("Loaded model from %s (T=%d, p=%d)", model_paths(path)[0], hyper.T, hyper.p)
    return model
