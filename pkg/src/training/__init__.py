"""
Training module for the nested model.

This module provides:
- TrainConfig, fit: Adam-based training with best-validation selection
- evaluate, EvalResult: scoring a dataset with the classification metrics
- save_checkpoint, load_checkpoint: resumable training state
- TrainHistory, EpochRecord: per-epoch history and its CSV form
- train_val_split: deterministic seeded splitting
- ResourceMonitor: process CPU and memory usage for training logs

Dependencies:
- torch, numpy, psutil
"""

from .history import HISTORY_FIELDS, EpochRecord, TrainHistory
from .monitor import ResourceMonitor
from .split import train_val_split
from .trainer import EvalResult, TrainConfig, evaluate, fit, load_checkpoint, save_checkpoint

__all__ = [
    'HISTORY_FIELDS',
    'EpochRecord',
    'TrainHistory',
    'ResourceMonitor',
    'train_val_split',
    'EvalResult',
    'TrainConfig',
    'evaluate',
    'fit',
    'load_checkpoint',
    'save_checkpoint',
]
