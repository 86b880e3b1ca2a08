"""
Simulation module: synthetic spike data with known truth.

This module provides:
- SimConfig: sizes, seeds and base-signal source
- omega_star, bank_statistics, omega_matrix: the true weight function bank
- gen_base_matrix, build_truth, sample_dataset, SimTruth, SimDataset
- save_simulation / load_simulation: NDLS container plus truth sidecar
- inject_motifs: continuous recordings with known event centers
- run_convergence, mae_table: sample-size study

Dependencies:
- numpy, scipy, pyyaml
"""

from .config import SYNTHETIC, SimConfig
from .bank import BANK_SIZE, LN_EPS, bank_statistics, omega_matrix, omega_star
from .generator import (
    TEST_STREAM,
    TRAIN_STREAM,
    SimDataset,
    SimTruth,
    ar2_signal,
    build_truth,
    g_star,
    g_star_batch,
    gen_base_matrix,
    sample_dataset,
    simulate,
    true_alpha,
    truth_rng,
)
from .persistence import (
    load_simulation,
    read_dataset,
    read_truth,
    save_simulation,
    truth_path,
    write_dataset,
    write_truth,
)
from .continuous import ContinuousSimulation, inject_motifs

__all__ = [
    'SYNTHETIC',
    'SimConfig',
    'BANK_SIZE',
    'LN_EPS',
    'bank_statistics',
    'omega_matrix',
    'omega_star',
    'TEST_STREAM',
    'TRAIN_STREAM',
    'SimDataset',
    'SimTruth',
    'ar2_signal',
    'build_truth',
    'g_star',
    'g_star_batch',
    'gen_base_matrix',
    'sample_dataset',
    'simulate',
    'true_alpha',
    'truth_rng',
    'load_simulation',
    'read_dataset',
    'read_truth',
    'save_simulation',
    'truth_path',
    'write_dataset',
    'write_truth',
    'ContinuousSimulation',
    'inject_motifs',
]
