"""
Simulated spike data with known ground truth.

Each sample starts from a d x (T+p) base matrix (AR(2) noise or a random
window of a supplied recording), standardized and split into X and Z. The true
channel weights are the column softmax of the bank functions applied to X, the
true probability is the logistic of beta1' S beta2 + beta0, and the label is a
Bernoulli draw from it.

Random streams:
- truth: default_rng([seed, 0])
- sample i of stream s: default_rng([seed, s, i]); s = 1 for training data,
  s = 2 for held-out data

Dependencies:
- numpy for random streams
- scipy.signal for the autoregressive filter
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import signal

from errors import DataError, DimensionError
from ndl.core import aggregate, compute_alpha, logistic
from ndl.dataset import SegmentDataset
from recording import read_recording, split_window, standardize_segment
from .bank import BANK_SIZE, omega_matrix

logger = logging.getLogger(__name__)

TRUTH_STREAM = 0
TRAIN_STREAM = 1
TEST_STREAM = 2
AR_BURN_IN = 500


@dataclass(frozen=True, eq=False)
class SimTruth:
    """
    Parameters fixed for one experiment suite.

    Attributes:
        omega_choice: p bank indices, drawn with replacement
        beta0: Intercept
        beta1: T-vector
        beta2: p-vector
    """

    omega_choice: np.ndarray
    beta0: float
    beta1: np.ndarray
    beta2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'omega_choice', np.asarray(self.omega_choice, dtype=np.int64))
        object.__setattr__(self, 'beta0', float(self.beta0))
        object.__setattr__(self, 'beta1', np.asarray(self.beta1, dtype=np.float64))
        object.__setattr__(self, 'beta2', np.asarray(self.beta2, dtype=np.float64))
        if self.beta2.shape != self.omega_choice.shape:
            raise DimensionError(
                f"beta2 has {self.beta2.size} entries for {self.omega_choice.size} bank choices"
            )

    @property
    def T(self):
        return self.beta1.size

    @property
    def p(self):
        return self.beta2.size

    def __eq__(self, other):
        return (isinstance(other, SimTruth)
                and np.array_equal(self.omega_choice, other.omega_choice)
                and self.beta0 == other.beta0
                and np.array_equal(self.beta1, other.beta1)
                and np.array_equal(self.beta2, other.beta2))


@dataclass(frozen=True, eq=False)
class SimDataset:
    """A labelled dataset plus the per-sample truth it was drawn from."""

    dataset: SegmentDataset
    alpha_star: np.ndarray
    g_star: np.ndarray
    truth: SimTruth
    seed: int

    def __len__(self):
        return len(self.dataset)

    def samples(self):
        """(X, Z, Y, alpha*, g*) per sample."""
        data = self.dataset
        return [(data.X[i], data.Z[i], int(data.Y[i]), self.alpha_star[i], float(self.g_star[i]))
                for i in range(len(data))]


def truth_rng(seed):
    return np.random.default_rng([int(seed), TRUTH_STREAM])


def sample_rng(seed, index, stream=TRAIN_STREAM):
    return np.random.default_rng([int(seed), int(stream), int(index)])


def ar2_signal(n_times, coeffs, rng, burn_in=AR_BURN_IN):
    """Stationary AR(2) series with unit-variance innovations."""
    a1, a2 = coeffs
    innovations = rng.standard_normal(n_times + burn_in)
    return signal.lfilter([1.0], [1.0, -a1, -a2], innovations)[burn_in:]


def gen_base_matrix(config, rng, source=None):
    """
    Standardized d x (T+p) base matrix.

    Args:
        config: SimConfig
        rng: numpy Generator for this sample
        source: Recording to slice in recording mode (read from
            config.base_source when omitted)

    Raises:
        DataError: Recording shorter than T+p
        DimensionError: Recording channel count differs from config.d
    """
    width = config.width
    if config.synthetic and source is None:
        base = np.stack([ar2_signal(width, config.ar_coeffs, rng) for _ in range(config.d)])
    else:
        source = source if source is not None else read_recording(config.base_source)
        if source.n_times < width:
            raise DataError(f"Recording has {source.n_times} samples, windows need {width}")
        if source.n_channels != config.d:
            raise DimensionError(f"Recording has {source.n_channels} channels, config d={config.d}")
        start = int(rng.integers(0, source.n_times - width + 1))
        base = source.samples[:, start:start + width]
    return standardize_segment(base)


def build_truth(config, rng):
    """Draw the bank choices and regression coefficients."""
    return SimTruth(
        omega_choice=rng.integers(0, BANK_SIZE, size=config.p),
        beta0=rng.standard_normal(),
        beta1=rng.standard_normal(config.T),
        beta2=rng.standard_normal(config.p),
    )


def true_alpha(X, truth):
    """(..., d, p) true channel weights of segments X."""
    return compute_alpha(omega_matrix(X, truth.omega_choice))


def g_star(X, Z, alpha, truth):
    """True spike probability of one (X, Z) pair."""
    S = aggregate(X, Z, alpha)
    return float(logistic(truth.beta1 @ S @ truth.beta2 + truth.beta0))


def g_star_batch(X, Z, alpha, truth):
    """True probabilities of stacked (n, d, .) pairs under the given channel weights."""
    S = np.einsum('ndt,ndk->ntk', X, alpha) + np.sum(alpha * Z, axis=(1, 2))[:, None, None]
    return logistic(np.einsum('t,ntk,k->n', truth.beta1, S, truth.beta2) + truth.beta0)


def draw_sample(config, truth, rng, source=None):
    """One (X, Z, Y, alpha*, g*) tuple from a sample stream."""
    X, Z = split_window(gen_base_matrix(config, rng, source), config.T, config.p)
    alpha = true_alpha(X, truth)
    prob = g_star(X, Z, alpha, truth)
    label = int(rng.random() < prob)
    return X, Z, label, alpha, prob


def sample_dataset(config, truth, n=None, seed=None, stream=TRAIN_STREAM, source=None):
    """
    Draw a labelled dataset for fixed truth.

    Args:
        config: SimConfig
        truth: SimTruth, fixed across the suite
        n: Sample count (config.n when omitted)
        seed: Stream seed (config.seed when omitted)
        stream: TRAIN_STREAM or TEST_STREAM
        source: Optional preloaded Recording for recording mode

    Returns:
        SimDataset: regenerating with the same arguments is bitwise identical
    """
    n = config.n if n is None else int(n)
    seed = config.seed if seed is None else int(seed)
    if (truth.T, truth.p) != (config.T, config.p):
        raise DimensionError(f"Truth is for T={truth.T}, p={truth.p}; config has T={config.T}, p={config.p}")
    if source is None and not config.synthetic:
        source = read_recording(config.base_source)

    X = np.empty((n, config.d, config.T))
    Z = np.empty((n, config.d, config.p))
    Y = np.empty(n, dtype=np.int64)
    alpha = np.empty((n, config.d, config.p))
    probs = np.empty(n)
    for i in range(n):
        X[i], Z[i], Y[i], alpha[i], probs[i] = draw_sample(
            config, truth, sample_rng(seed, i, stream), source)

    logger.info("Simulated %d samples (seed %d, stream %d): %.1f%% positive",
                n, seed, stream, 100.0 * Y.mean())
    return SimDataset(dataset=SegmentDataset(X=X, Z=Z, Y=Y), alpha_star=alpha,
                      g_star=probs, truth=truth, seed=seed)


def simulate(config, truth=None, source=None):
    """Truth from config.seed (unless given) plus a training dataset."""
    truth = truth if truth is not None else build_truth(config, truth_rng(config.seed))
    return sample_dataset(config, truth, source=source)
