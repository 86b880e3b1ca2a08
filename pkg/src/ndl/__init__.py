"""
Nested model module: channel-weighted spike classifier.

This module provides:
- NdlModel, NdlHyper, build_model: the omega and g networks
- omega_forward, compute_alpha, aggregate, g_forward, predict_proba, predict_batch
- nll_loss: Bernoulli negative log-likelihood
- channel_importance, top_channels: channel ranking
- save_model / load_model: sidecar + tensor blob files
- SegmentDataset: stacked (X, Z, Y) samples

Dependencies:
- torch, numpy, pyyaml
"""

from .network import NdlHyper, NdlModel, build_model, init_params
from .core import (
    aggregate,
    channel_importance,
    compute_alpha,
    g_forward,
    logistic,
    nll_loss,
    omega_forward,
    predict_batch,
    predict_proba,
    top_channels,
)
from .dataset import SegmentDataset
from .serialization import load_model, save_model

__all__ = [
    'NdlHyper',
    'NdlModel',
    'build_model',
    'init_params',
    'aggregate',
    'channel_importance',
    'compute_alpha',
    'g_forward',
    'logistic',
    'nll_loss',
    'omega_forward',
    'predict_batch',
    'predict_proba',
    'top_channels',
    'SegmentDataset',
    'load_model',
    'save_model',
]
