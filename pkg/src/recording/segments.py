"""
Segmentation of recordings into (X, Z) pairs.

A window of T + p samples is split per channel into the middle T columns (X)
and the two flanks of p/2 columns each, concatenated as Z.

Dependencies:
- numpy for slicing
"""

import numpy as np

from errors import DimensionError, ParameterError
from .types import AuxContext, MultiChannelSegment

STD_EPS = 1e-8


def _check_sizes(T, p):
    if T < 1:
        raise ParameterError(f"Segment length T must be >= 1, got {T}")
    if p < 0 or p % 2:
        raise ParameterError(f"Context length p must be even and >= 0, got {p}")


def split_window(window, T, p):
    """
    Split a d x (T+p) window into X (d x T) and Z (d x p).

    Z holds the first p/2 columns followed by the last p/2 columns.
    """
    _check_sizes(T, p)
    window = np.asarray(window)
    if window.ndim != 2 or window.shape[1] != T + p:
        raise DimensionError(f"Window must be d x {T + p}, got {window.shape}")
    half = p // 2
    X = window[:, half:half + T]
    Z = np.concatenate([window[:, :half], window[:, half + T:]], axis=1)
    return X, Z


def join_window(X, Z):
    """Inverse of split_window: flank ++ X ++ flank."""
    X = np.asarray(X)
    Z = np.asarray(Z)
    if X.shape[0] != Z.shape[0] or Z.shape[1] % 2:
        raise DimensionError(f"Cannot join X {X.shape} with Z {Z.shape}")
    half = Z.shape[1] // 2
    return np.concatenate([Z[:, :half], X, Z[:, half:]], axis=1)


def window_centers(n_times, T, p, stride):
    """0-based centers (start + (T+p)/2) of every window that fits in n_times samples."""
    _check_sizes(T, p)
    if stride < 1:
        raise ParameterError(f"Stride must be >= 1, got {stride}")
    width = T + p
    if width > n_times:
        return np.empty(0, dtype=np.int64)
    starts = np.arange(0, n_times - width + 1, stride, dtype=np.int64)
    return starts + width // 2


def segment_stream(recording, T, p, stride):
    """
    Yield (MultiChannelSegment, AuxContext, center) for each window of a recording.

    Windows advance by stride; windows that would run past the end are dropped,
    so a recording shorter than T + p yields nothing.

    Args:
        recording: Source Recording
        T: Segment length in samples
        p: Context length in samples (even)
        stride: Step between window starts

    Raises:
        ParameterError: Odd p, T < 1 or stride < 1
    """
    width = T + p
    for center in window_centers(recording.n_times, T, p, stride):
        start = int(center) - width // 2
        X, Z = split_window(recording.samples[:, start:start + width], T, p)
        yield (MultiChannelSegment(X=X, fs=recording.fs, origin_time=int(center)),
               AuxContext(Z=Z),
               int(center))


def standardize_segment(matrix, eps=STD_EPS):
    """
    Center each row, then divide by the standard deviation of all entries.

    A zero-variance matrix comes back as all zeros.

    Args:
        matrix: d x (T+p) matrix, or a stack of them (..., d, T+p)
        eps: Floor on the standard deviation
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim < 2 or matrix.size == 0:
        raise DimensionError(f"Cannot standardize an array of shape {matrix.shape}")
    centered = matrix - matrix.mean(axis=-1, keepdims=True)
    scale = np.maximum(centered.std(axis=(-2, -1), keepdims=True), eps)
    return centered / scale
