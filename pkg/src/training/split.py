"""
Deterministic train/validation splitting of segment datasets.

Dependencies:
- numpy
"""

import numpy as np

from errors import ValidationError


def train_val_split(n, val_fraction, seed):
    """
    Seeded permutation split.

    Args:
        n: Number of samples (at least 2)
        val_fraction: Share of samples held out, rounded, at least one on each side
        seed: Split seed

    Returns:
        (train indices, validation indices), each sorted ascending
    """
    if n < 2:
        raise ValidationError(f"Need at least 2 samples to split, got {n}")
    n_val = min(max(int(round(n * val_fraction)), 1), n - 1)
    order = np.random.default_rng([int(seed), 0]).permutation(n)
    return np.sort(order[n_val:]), np.sort(order[:n_val])
