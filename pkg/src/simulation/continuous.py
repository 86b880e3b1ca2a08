"""
Continuous synthetic recordings with injected focal motifs.

The background is one AR(2) signal shared by every channel, scaled to unit
variance. A motif replaces the middle T samples of one channel with an
independent AR(2) segment amplified by gain, so its channel weights are
concentrated on that channel. A motif is accepted only when its true
probability reaches min_g and one channel of its true weights clears the
detection gate.

Away from motifs all rows of a window are equal, so any model gives uniform
channel weights there and the gate rejects the window. Only windows whose
middle T samples overlap a motif can pass, which keeps every annotation
within T samples of a motif center.

Dependencies:
- numpy for random streams
"""

import logging
from dataclasses import dataclass

import numpy as np

from detection.gate import GATE_FACTOR
from errors import DataError, ParameterError
from ndl.core import channel_importance
from ndl.dataset import default_channel_names
from recording import Recording, split_window, standardize_segment
from .generator import ar2_signal, g_star, true_alpha

logger = logging.getLogger(__name__)

BACKGROUND_STREAM = 3
MOTIF_STREAM = 4
MAX_ATTEMPTS_PER_MOTIF = 5000
MOTIF_GAIN = 8.0


@dataclass(frozen=True, eq=False)
class ContinuousSimulation:
    recording: Recording
    centers: np.ndarray
    g_star: np.ndarray
    channels: np.ndarray


def _motif_centers(length, count, width, rng):
    """Sorted centers at least 2 * width apart, clear of both ends."""
    slot = length // count
    if slot < 2 * width:
        raise ParameterError(
            f"{count} motifs of width {width} do not fit in {length} samples"
        )
    jitter = rng.integers(0, slot - 2 * width + 1, size=count)
    return np.arange(count, dtype=np.int64) * slot + width + jitter


def _unit(signal):
    return signal / signal.std()


def motif_gates(X, truth, factor=GATE_FACTOR):
    """True when some channel of the true weights of X exceeds factor * p / d."""
    importance = channel_importance(true_alpha(X, truth))
    return bool(importance.max() > factor * importance.sum() / X.shape[0])


def _find_motif(config, truth, background, seed, index, min_g, gain, gate_factor):
    """
    Draw focal segments until one passes both acceptance tests.

    Returns:
        (window, prob, channel): the raw width-sample window, its true probability
        and the amplified channel
    """
    half = config.p // 2
    for attempt in range(MAX_ATTEMPTS_PER_MOTIF):
        rng = np.random.default_rng([int(seed), MOTIF_STREAM, int(index), attempt])
        channel = int(rng.integers(config.d))
        window = background.copy()
        window[channel, half:half + config.T] = gain * _unit(ar2_signal(config.T, config.ar_coeffs, rng))
        X, Z = split_window(standardize_segment(window), config.T, config.p)
        prob = g_star(X, Z, true_alpha(X, truth), truth)
        if prob >= min_g and motif_gates(X, truth, gate_factor):
            return window, prob, channel
    raise DataError(
        f"No focal window with true probability >= {min_g} passing the gate "
        f"in {MAX_ATTEMPTS_PER_MOTIF} draws"
    )


def inject_motifs(config, truth, length, count, seed=None, min_g=0.95, gain=MOTIF_GAIN,
                  gate_factor=GATE_FACTOR):
    """
    Build a continuous recording with count motifs at known centers.

    Args:
        config: SimConfig (synthetic base, d >= 2)
        truth: SimTruth defining the true probability
        length: Recording length in samples
        count: Number of motifs (>= 1)
        seed: Stream seed (config.seed when omitted)
        min_g: Minimum true probability of an injected window
        gain: Amplitude of the focal channel relative to the background
        gate_factor: Gate factor the true weights of each motif must clear

    Returns:
        ContinuousSimulation: recording, 0-based motif centers, their true
        probabilities and focal channels
    """
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    if not 0 < min_g < 1:
        raise ParameterError(f"min_g must be in (0, 1), got {min_g}")
    if config.d < 2:
        raise ParameterError("Focal motifs need at least two channels")
    if gain <= 0:
        raise ParameterError(f"gain must be > 0, got {gain}")
    seed = config.seed if seed is None else int(seed)
    width = config.width
    rng = np.random.default_rng([seed, BACKGROUND_STREAM])

    shared = _unit(ar2_signal(length, config.ar_coeffs, rng))
    samples = np.tile(shared, (config.d, 1))
    centers = _motif_centers(length, count, width, rng)
    probs = np.empty(count)
    channels = np.empty(count, dtype=np.int64)
    for index, center in enumerate(centers):
        start = int(center) - width // 2
        window, probs[index], channels[index] = _find_motif(
            config, truth, samples[:, start:start + width], seed, index, min_g, gain, gate_factor)
        samples[:, start:start + width] = window

    logger.info("Injected %d motifs into a %d-sample recording", count, length)
    recording = Recording(samples=samples, fs=config.fs,
                          channel_names=default_channel_names(config.d))
    return ContinuousSimulation(recording=recording, centers=centers, g_star=probs, channels=channels)
