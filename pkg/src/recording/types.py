"""
Domain types for multichannel recordings and the (X, Z) segment pairs cut from them.

Samples are held in float64 in memory; the NDLR container stores float32.

Dependencies:
- numpy for sample storage
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from errors import DimensionError, ValidationError

COMMON_AVERAGE = 'COMMON_AVERAGE'


def _as_matrix(values, what):
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 2:
        raise DimensionError(f"{what} must be a 2-D matrix, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"{what} contains non-finite values")
    return array


@dataclass(frozen=True, eq=False)
class Recording:
    """
    Continuous d-channel signal.

    Attributes:
        samples: d x T0 matrix of amplitudes
        fs: Sampling rate in Hz
        channel_names: One unique name per row of samples
    """

    samples: np.ndarray
    fs: float
    channel_names: Tuple[str, ...]

    def __post_init__(self):
        samples = _as_matrix(self.samples, "Recording samples")
        names = tuple(str(name) for name in self.channel_names)
        d, n_times = samples.shape
        if d < 1 or n_times < 1:
            raise ValidationError(f"Recording needs d >= 1 and T0 >= 1, got {samples.shape}")
        if len(names) != d:
            raise ValidationError(f"{len(names)} channel names for {d} channels")
        if len(set(names)) != d:
            duplicates = sorted({name for name in names if names.count(name) > 1})
            raise ValidationError(f"Duplicate channel names: {duplicates}")
        if not np.isfinite(self.fs) or self.fs <= 0:
            raise ValidationError(f"Sampling rate must be positive, got {self.fs}")
        samples.setflags(write=False)
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, 'fs', float(self.fs))
        object.__setattr__(self, 'channel_names', names)

    @property
    def n_channels(self):
        return self.samples.shape[0]

    @property
    def n_times(self):
        return self.samples.shape[1]

    @property
    def duration(self):
        """Recording length in seconds."""
        return self.n_times / self.fs

    def with_samples(self, samples, channel_names=None):
        """Return a new recording with the same rate and replaced samples."""
        names = self.channel_names if channel_names is None else channel_names
        return Recording(samples=samples, fs=self.fs, channel_names=tuple(names))


@dataclass(frozen=True)
class MontageSpec:
    """
    Re-referencing scheme.

    Either a list of bipolar (anode, cathode) pairs or the common average.
    """

    name: str
    pairs: Tuple[Tuple[str, str], ...] = ()
    common_average: bool = False

    def __post_init__(self):
        if self.common_average and self.pairs:
            raise ValidationError(f"Montage {self.name!r} cannot have pairs and common_average")
        if not self.common_average and not self.pairs:
            raise ValidationError(f"Montage {self.name!r} has no pairs")
        object.__setattr__(self, 'pairs', tuple((str(a), str(c)) for a, c in self.pairs))


@dataclass(frozen=True, eq=False)
class MultiChannelSegment:
    """d x T window of interest (X)."""

    X: np.ndarray
    fs: float
    origin_time: Optional[int] = None

    def __post_init__(self):
        X = _as_matrix(self.X, "Segment X")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise ValidationError(f"Segment needs d >= 1 and T >= 1, got {X.shape}")
        object.__setattr__(self, 'X', X)

    @property
    def n_channels(self):
        return self.X.shape[0]


@dataclass(frozen=True, eq=False)
class AuxContext:
    """d x p surrounding-signal context (Z)."""

    Z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'Z', _as_matrix(self.Z, "Context Z"))
