"""
In-memory collection of labelled (X, Z, Y) segments.

Dependencies:
- numpy for storage
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from errors import DimensionError, ParameterError, ValidationError


def default_channel_names(d):
    return tuple(f"ch{i:03d}" for i in range(d))


@dataclass(frozen=True, eq=False)
class SegmentDataset:
    """
    Stacked segments sharing one channel layout.

    Attributes:
        X: (n, d, T) segments of interest
        Z: (n, d, p) context
        Y: (n,) binary labels
        channel_names: d names, defaults to ch000, ch001, ...
        centers: optional (n,) sample index of each window center
    """

    X: np.ndarray
    Z: np.ndarray
    Y: np.ndarray
    channel_names: Optional[Tuple[str, ...]] = None
    centers: Optional[np.ndarray] = None

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        Z = np.asarray(self.Z, dtype=np.float64)
        Y = np.asarray(self.Y).astype(np.int64).reshape(-1)
        if X.ndim != 3 or Z.ndim != 3:
            raise DimensionError(f"X and Z must be (n, d, .), got {X.shape} and {Z.shape}")
        if X.shape[:2] != Z.shape[:2] or X.shape[0] != Y.shape[0]:
            raise DimensionError(f"Mismatched shapes X {X.shape}, Z {Z.shape}, Y {Y.shape}")
        if not np.all(np.isin(Y, (0, 1))):
            raise ValidationError("Labels must be 0 or 1")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Z))):
            raise ValidationError("Segments contain non-finite values")
        names = self.channel_names or default_channel_names(X.shape[1])
        if len(names) != X.shape[1]:
            raise DimensionError(f"{len(names)} channel names for d={X.shape[1]}")
        object.__setattr__(self, 'X', X)
        object.__setattr__(self, 'Z', Z)
        object.__setattr__(self, 'Y', Y)
        object.__setattr__(self, 'channel_names', tuple(names))
        if self.centers is not None:
            object.__setattr__(self, 'centers', np.asarray(self.centers, dtype=np.int64))

    @classmethod
    def from_samples(cls, samples, channel_names=None):
        """Build from a sequence of (X, Z, Y) triples."""
        samples = list(samples)
        if not samples:
            raise ParameterError("Dataset needs at least one sample")
        X = np.stack([np.asarray(s[0], dtype=np.float64) for s in samples])
        Z = np.stack([np.asarray(s[1], dtype=np.float64) for s in samples])
        Y = np.array([int(s[2]) for s in samples])
        return cls(X=X, Z=Z, Y=Y, channel_names=channel_names)

    def __len__(self):
        return self.X.shape[0]

    def __iter__(self):
        for i in range(len(self)):
            yield self.X[i], self.Z[i], int(self.Y[i])

    @property
    def n_channels(self):
        return self.X.shape[1]

    @property
    def T(self):
        return self.X.shape[2]

    @property
    def p(self):
        return self.Z.shape[2]

    @property
    def positive_fraction(self):
        return float(self.Y.mean()) if len(self) else 0.0

    def subset(self, indices):
        """Dataset restricted to the given sample indices."""
        indices = np.asarray(indices, dtype=np.int64)
        centers = None if self.centers is None else self.centers[indices]
        return SegmentDataset(X=self.X[indices], Z=self.Z[indices], Y=self.Y[indices],
                              channel_names=self.channel_names, centers=centers)
