"""
NDLR container reader and writer.

Layout (all little-endian):
    0-3    magic "NDLR"
    4-7    version u32 (= 1)
    8-11   d u32
    12-19  T0 u64
    20-27  fs f64
    then d channel names, each u16 length + UTF-8 bytes
    then d*T0 f32 samples, channel-major

Dependencies:
- numpy for payload decoding
"""

import logging
import struct

import numpy as np

from errors import CorruptionError, FormatError
from .types import Recording

logger = logging.getLogger(__name__)

MAGIC = b'NDLR'
VERSION = 1
_HEADER = struct.Struct('<4sIIQd')
_NAME_LEN = struct.Struct('<H')
_SAMPLE_DTYPE = np.dtype('<f4')


def encode_recording(recording):
    """Serialize a recording to NDLR bytes."""
    d, n_times = recording.samples.shape
    parts = [_HEADER.pack(MAGIC, VERSION, d, n_times, recording.fs)]
    for name in recording.channel_names:
        raw = name.encode('utf-8')
        if len(raw) > 0xFFFF:
            raise FormatError(f"Channel name too long for NDLR: {name[:32]!r}...")
        parts.append(_NAME_LEN.pack(len(raw)))
        parts.append(raw)
    parts.append(np.ascontiguousarray(recording.samples, dtype=_SAMPLE_DTYPE).tobytes())
    return b''.join(parts)


def decode_recording(data):
    """
    Parse NDLR bytes into a Recording.

    Raises:
        FormatError: Bad magic or unsupported version
        CorruptionError: Truncated or oversized payload, undecodable names
        ValidationError: Duplicate channel names or invalid sampling rate
    """
    if data[:len(MAGIC)] != MAGIC:
        raise FormatError(f"Bad NDLR magic {bytes(data[:len(MAGIC)])!r}")
    if len(data) < _HEADER.size:
        raise CorruptionError(f"Truncated NDLR header: {len(data)} bytes")

    _, version, d, n_times, fs = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise FormatError(f"Unsupported NDLR version {version} (expected {VERSION})")

    offset = _HEADER.size
    names = []
    for index in range(d):
        if offset + _NAME_LEN.size > len(data):
            raise CorruptionError(f"Truncated channel name table at channel {index}")
        (length,) = _NAME_LEN.unpack_from(data, offset)
        offset += _NAME_LEN.size
        if offset + length > len(data):
            raise CorruptionError(f"Truncated channel name at channel {index}")
        try:
            names.append(data[offset:offset + length].decode('utf-8'))
        except UnicodeDecodeError as e:
            raise CorruptionError(f"Channel name {index} is not valid UTF-8") from e
        offset += length

    expected = d * n_times * _SAMPLE_DTYPE.itemsize
    available = len(data) - offset
    if available != expected:
        raise CorruptionError(
            f"NDLR payload holds {available} bytes, header requires {expected} "
            f"({d} channels x {n_times} samples)"
        )

    samples = np.frombuffer(data, dtype=_SAMPLE_DTYPE, count=d * n_times, offset=offset)
    return Recording(samples=samples.reshape(d, n_times).astype(np.float64),
                     fs=fs, channel_names=tuple(names))


def read_recording(path):
    """
    Read an NDLR file.

    Args:
        path: File path

    Returns:
        Recording: Decoded recording
    """
    with open(path, 'rb') as f:
        data = f.read()
    recording = decode_recording(data)
    logger.debug("Read %s: %d channels x %d samples at %.1f Hz",
                 path, recording.n_channels, recording.n_times, recording.fs)
    return recording


def write_recording(recording, path):
    """
    Write a recording as an NDLR file.

    Args:
        recording: Recording to store
        path: Destination file path (OSError if unwritable)
    """
    data = encode_recording(recording)
    with open(path, 'wb') as f:
        f.write(data)
    logger.debug("Wrote %s (%d bytes)", path, len(data))


def header_size(channel_names):
    """Number of bytes preceding the sample payload."""
    return _HEADER.size + sum(_NAME_LEN.size + len(name.encode('utf-8')) for name in channel_names)
