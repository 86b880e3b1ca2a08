"""
Sliding-window scan of a continuous recording.

Every window of T + p samples is split into X (middle T columns) and Z (the
two flanks) and scored by the model. Windows are processed in chunks so the
stacked windows of a long recording never sit in memory at once.

Dependencies:
- numpy for window assembly
- ndl for batched inference
"""

import logging

import numpy as np

from errors import DimensionError, ParameterError
from ndl.core import channel_importance, predict_batch
from recording import standardize_segment, window_centers
from .types import Candidate

logger = logging.getLogger(__name__)

CHUNK = 1024


def window_stack(recording, centers, T, p, standardize=True):
    """(len(centers), d, T) X and (len(centers), d, p) Z for the given centers."""
    width = T + p
    half = p // 2
    starts = np.asarray(centers, dtype=np.int64) - width // 2
    index = starts[:, None] + np.arange(width)[None, :]
    windows = np.transpose(recording.samples[:, index], (1, 0, 2))
    if standardize:
        windows = standardize_segment(windows)
    X = windows[:, :, half:half + T]
    Z = np.concatenate([windows[:, :, :half], windows[:, :, half + T:]], axis=2)
    return X, Z


def score_windows(recording, model, centers, standardize=True, chunk=CHUNK):
    """
    Probabilities and channel importances at the given window centers.

    Returns:
        (probs, importance): (m,) and (m, d) arrays
    """
    T, p = model.hyper.T, model.hyper.p
    centers = np.asarray(centers, dtype=np.int64)
    probs = np.empty(centers.size)
    importance = np.empty((centers.size, recording.n_channels))
    for start in range(0, centers.size, chunk):
        block = centers[start:start + chunk]
        X, Z = window_stack(recording, block, T, p, standardize)
        block_probs, _, alpha = predict_batch(X, Z, model, batch_size=chunk, with_alpha=True)
        probs[start:start + block.size] = block_probs
        importance[start:start + block.size] = channel_importance(alpha)
    return probs, importance


def scan(recording, model, threshold, stride=1, standardize=True):
    """
    Candidates with probability above threshold, ordered by center.

    Args:
        recording: Recording with at least T + p samples (shorter gives [])
        model: NdlModel
        threshold: Probability threshold C in (0, 1)
        stride: Step between window starts
        standardize: Standardize each window before scoring

    Raises:
        ParameterError: threshold outside (0, 1) or stride < 1
    """
    if not 0 < threshold < 1:
        raise ParameterError(f"Threshold must be in (0, 1), got {threshold}")
    if recording.n_channels < 1:
        raise DimensionError("Recording has no channels")
    centers = window_centers(recording.n_times, model.hyper.T, model.hyper.p, stride)
    if centers.size == 0:
        logger.warning("Recording of %d samples is shorter than one window", recording.n_times)
        return []
    probs, importance = score_windows(recording, model, centers, standardize)
    keep = np.flatnonzero(probs > threshold)
    logger.info("Scanned %d windows, %d above %.3f", centers.size, keep.size, threshold)
    return [Candidate(center=centers[i], prob=probs[i], importance=importance[i]) for i in keep]
