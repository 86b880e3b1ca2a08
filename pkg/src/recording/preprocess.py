"""
Recording preprocessing pipeline: montage, then band-pass.

Driven by the `preprocessing` section of the run configuration.

Dependencies:
- recording.montage and recording.filters
"""

import logging

from .filters import DEFAULT_BAND, DEFAULT_ORDER, bandpass_filter
from .montage import apply_montage, load_montage

logger = logging.getLogger(__name__)


def preprocess_recording(recording, montage=None, lo=DEFAULT_BAND[0], hi=DEFAULT_BAND[1],
                         filter_order=DEFAULT_ORDER):
    """
    Apply the optional montage, then the band-pass filter.

    Args:
        recording: Raw Recording
        montage: MontageSpec, bundled montage name, montage file path, or None
        lo, hi: Band edges in Hz
        filter_order: Butterworth order
    """
    if montage is not None:
        if isinstance(montage, str):
            montage = load_montage(montage)
        recording = apply_montage(recording, montage)
    recording = bandpass_filter(recording, lo=lo, hi=hi, order=filter_order)
    logger.info("Preprocessed recording: %d channels, %.1f s, band %.1f-%.1f Hz",
                recording.n_channels, recording.duration, lo, hi)
    return recording


def preprocess_from_config(recording, section):
    """Run preprocess_recording with a `preprocessing` config section."""
    return preprocess_recording(
        recording,
        montage=section.get('montage'),
        lo=section.get('lo', DEFAULT_BAND[0]),
        hi=section.get('hi', DEFAULT_BAND[1]),
        filter_order=section.get('filter_order', DEFAULT_ORDER),
    )
