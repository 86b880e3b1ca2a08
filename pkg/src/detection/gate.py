"""
Channel-weight gate: a candidate needs at least one channel whose importance
exceeds factor times the mean importance (p / d).

Dependencies:
- numpy
"""

import numpy as np

GATE_FACTOR = 1.5


def gate(candidate, d=None, p=None, factor=GATE_FACTOR):
    """
    Channels passing the gate, most important first (ties to the lower index).

    Args:
        candidate: Candidate
        d: Channel count (len(importance) when omitted)
        p: Context width (sum of importances when omitted)
        factor: Multiple of the mean importance to exceed
    """
    importance = candidate.importance
    d = importance.size if d is None else d
    p = float(importance.sum()) if p is None else p
    passing = np.flatnonzero(importance > factor * p / d)
    order = np.lexsort((passing, -importance[passing]))
    return [int(i) for i in passing[order]]


def passes(candidate, d=None, p=None, factor=GATE_FACTOR):
    return bool(gate(candidate, d, p, factor))
