"""
Recovery errors for simulation studies: MAE of the channel weights and of g.

Dependencies:
- numpy
"""

import numpy as np

from errors import DimensionError


def mae_alpha(truth, estimate):
    """
    Mean Frobenius distance between true and estimated weight matrices.

    Args:
        truth: n matrices (or an (n, d, p) array) of true weights
        estimate: matching estimated weights
    """
    truth = np.asarray(truth, dtype=np.float64)
    estimate = np.asarray(estimate, dtype=np.float64)
    if truth.shape != estimate.shape or truth.ndim != 3:
        raise DimensionError(f"Weight stacks must match as (n, d, p): {truth.shape} vs {estimate.shape}")
    if truth.shape[0] == 0:
        raise DimensionError("mae_alpha needs at least one sample")
    diff = truth - estimate
    return float(np.mean(np.sqrt(np.sum(diff * diff, axis=(1, 2)))))


def mae_g(truth_values, estimate_values):
    """Mean absolute difference between true and estimated probabilities."""
    truth_values = np.asarray(truth_values, dtype=np.float64).reshape(-1)
    estimate_values = np.asarray(estimate_values, dtype=np.float64).reshape(-1)
    if truth_values.shape != estimate_values.shape:
        raise DimensionError(f"{truth_values.size} true values for {estimate_values.size} estimates")
    if truth_values.size == 0:
        raise DimensionError("mae_g needs at least one value")
    return float(np.mean(np.abs(truth_values - estimate_values)))


def top1_hit_rate(estimated, truth, mask=None):
    """
    Share of segments whose most important estimated channel is the true one.

    Args:
        estimated: (n, d) estimated channel importances
        truth: (n, d) true channel importances
        mask: optional (n,) boolean selection of segments to score

    Ties go to the lower channel index on both sides.
    """
    estimated = np.asarray(estimated, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if estimated.shape != truth.shape or estimated.ndim != 2:
        raise DimensionError(f"Importances must match as (n, d): {estimated.shape} vs {truth.shape}")
    hits = np.argmax(estimated, axis=1) == np.argmax(truth, axis=1)
    if mask is not None:
        hits = hits[np.asarray(mask, dtype=bool)]
    if hits.size == 0:
        raise DimensionError("top1_hit_rate needs at least one segment")
    return float(np.mean(hits))
