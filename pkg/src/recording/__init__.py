"""
Recording module for signal ingestion and preparation.

This module provides:
- Recording, MontageSpec, MultiChannelSegment, AuxContext: domain types
- read_recording / write_recording: NDLR container I/O
- apply_montage / load_montage: bipolar and common-average re-referencing
- bandpass_filter: zero-phase Butterworth band-pass
- segment_stream / standardize_segment: (X, Z) segmentation
- preprocess_recording: montage + band-pass pipeline

Dependencies:
- numpy, scipy.signal, pyyaml
"""

from .types import COMMON_AVERAGE, AuxContext, MontageSpec, MultiChannelSegment, Recording
from .container import read_recording, write_recording
from .montage import apply_montage, load_montage
from .filters import bandpass_filter
from .segments import join_window, segment_stream, split_window, standardize_segment, window_centers
from .preprocess import preprocess_from_config, preprocess_recording

__all__ = [
    'COMMON_AVERAGE',
    'AuxContext',
    'MontageSpec',
    'MultiChannelSegment',
    'Recording',
    'read_recording',
    'write_recording',
    'apply_montage',
    'load_montage',
    'bandpass_filter',
    'join_window',
    'segment_stream',
    'split_window',
    'standardize_segment',
    'window_centers',
    'preprocess_from_config',
    'preprocess_recording',
]
