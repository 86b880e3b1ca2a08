"""
The eight true weight functions applied to one channel of a segment.

In order: log variance, its negative, skewness, its negative, excess kurtosis,
its negative, log sum |x sin x|, log sum |x cos x|. Moments are population
(divide-by-T) moments; logarithm arguments are clamped at LN_EPS.

Dependencies:
- numpy
"""

import numpy as np

from errors import ParameterError

LN_EPS = 1e-12
BANK_SIZE = 8


def bank_statistics(x):
    """
    All eight function values along the last axis.

    Args:
        x: (..., T) array

    Returns:
        numpy.ndarray: (..., 8) array
    """
    x = np.asarray(x, dtype=np.float64)
    mu = x.mean(axis=-1, keepdims=True)
    centered = x - mu
    variance = np.mean(centered * centered, axis=-1)
    sigma = np.sqrt(variance)[..., None]
    z = np.divide(centered, sigma, out=np.zeros_like(centered), where=sigma > 0)

    log_var = np.log(np.maximum(variance, LN_EPS))
    skew = np.mean(z ** 3, axis=-1)
    kurt = np.mean(z ** 4, axis=-1) - 3.0
    log_sin = np.log(np.maximum(np.sum(np.abs(x * np.sin(x)), axis=-1), LN_EPS))
    log_cos = np.log(np.maximum(np.sum(np.abs(x * np.cos(x)), axis=-1), LN_EPS))
    return np.stack([log_var, -log_var, skew, -skew, kurt, -kurt, log_sin, log_cos], axis=-1)


def omega_star(fn_index, x):
    """Value of bank function fn_index on one T-vector."""
    if not 0 <= int(fn_index) < BANK_SIZE:
        raise ParameterError(f"Bank index must be in 0..{BANK_SIZE - 1}, got {fn_index}")
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    return float(bank_statistics(x)[int(fn_index)])


def omega_matrix(X, omega_choice):
    """
    True weight scores of a segment.

    Args:
        X: (..., d, T) segments
        omega_choice: p bank indices

    Returns:
        numpy.ndarray: (..., d, p) scores; column k applies bank function omega_choice[k]
    """
    choice = np.asarray(omega_choice, dtype=np.int64)
    if choice.size and (choice.min() < 0 or choice.max() >= BANK_SIZE):
        raise ParameterError(f"Bank indices must be in 0..{BANK_SIZE - 1}")
    return bank_statistics(X)[..., choice]
