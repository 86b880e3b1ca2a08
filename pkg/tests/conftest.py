"""Shared fixtures: small architectures and datasets that train in seconds."""

import numpy as np
import pytest

from ndl import NdlHyper, SegmentDataset, build_model
from simulation import SimConfig, build_truth, sample_dataset, truth_rng


SMALL_HYPER = NdlHyper(T=16, p=8, omega_widths=(4,), g_widths=(4,), kernel_size=3, stride=2)


@pytest.fixture
def small_hyper():
    return SMALL_HYPER


@pytest.fixture
def small_model():
    return build_model(SMALL_HYPER, seed=3)


@pytest.fixture
def small_sim_config():
    return SimConfig(d=4, T=16, p=8, n=64, seed=11)


@pytest.fixture
def small_sim(small_sim_config):
    truth = build_truth(small_sim_config, truth_rng(small_sim_config.seed))
    return sample_dataset(small_sim_config, truth)


def separable_dataset(n=200, d=3, T=16, p=8, seed=0):
    """Labels set by the sign of a channel-0 offset, so a model can separate them."""
    rng = np.random.default_rng(seed)
    Y = np.arange(n) % 2
    X = rng.standard_normal((n, d, T)) * 0.5
    X[:, 0, :] += np.where(Y == 1, 2.0, -2.0)[:, None]
    Z = rng.standard_normal((n, d, p)) * 0.5
    return SegmentDataset(X=X, Z=Z, Y=Y)
