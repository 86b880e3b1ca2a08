"""
Zero-phase band-pass filtering.

A Butterworth design in second-order sections, run forward and backward
(scipy.signal.sosfiltfilt), so the effective order is doubled and the phase
response is zero.

Dependencies:
- scipy.signal for filter design and application
"""

import logging

from scipy import signal

from errors import ParameterError

logger = logging.getLogger(__name__)

DEFAULT_BAND = (1.0, 45.0)
DEFAULT_ORDER = 4


def bandpass_filter(recording, lo=DEFAULT_BAND[0], hi=DEFAULT_BAND[1], order=DEFAULT_ORDER):
    """
    Band-pass filter every channel of a recording.

    Args:
        recording: Source Recording
        lo: Lower cut-off in Hz
        hi: Upper cut-off in Hz (must stay below Nyquist)
        order: Butterworth order of the single-pass design

    Returns:
        Recording: Filtered recording of the same length

    Raises:
        ParameterError: If not 0 < lo < hi < fs/2
    """
    nyquist = recording.fs / 2.0
    if not 0 < lo < hi < nyquist:
        raise ParameterError(
            f"Band-pass needs 0 < lo < hi < fs/2, got lo={lo}, hi={hi}, fs/2={nyquist}"
        )
    if order < 1:
        raise ParameterError(f"Filter order must be >= 1, got {order}")

    sos = signal.butter(order, [lo, hi], btype='bandpass', fs=recording.fs, output='sos')
    # Short recordings cannot take the default edge padding
    padlen = min(3 * (2 * len(sos) + 1), recording.n_times - 1)
    filtered = signal.sosfiltfilt(sos, recording.samples, axis=1, padlen=padlen)
    logger.debug("Band-pass %.1f-%.1f Hz (order %d) on %d channels",
                 lo, hi, order, recording.n_channels)
    return recording.with_samples(filtered)
