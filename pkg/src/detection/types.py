"""
Detector records.

Dependencies:
- numpy
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class Candidate:
    """
    A window whose spike probability cleared the threshold.

    Attributes:
        center: 0-based sample index of the window center
        prob: Spike probability
        importance: d channel importances, summing to p
    """

    center: int
    prob: float
    importance: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'center', int(self.center))
        object.__setattr__(self, 'prob', float(self.prob))
        object.__setattr__(self, 'importance', np.asarray(self.importance, dtype=np.float64))


@dataclass(frozen=True)
class Annotation:
    """
    A reported spike.

    Attributes:
        center: 0-based sample index
        center_seconds: center / fs
        prob: Spike probability
        top_channels: (name, importance) pairs clearing the gate, most important first
    """

    center: int
    center_seconds: float
    prob: float
    top_channels: Tuple[Tuple[str, float], ...]

    def to_record(self):
        return {
            'center_sample': int(self.center),
            'center_seconds': float(self.center_seconds),
            'prob': float(self.prob),
            'top_channels': [{'name': name, 'importance': float(value)}
                             for name, value in self.top_channels],
        }
