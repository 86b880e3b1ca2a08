"""
Empirical-risk minimization of the nested model.

fit() splits the data into training and validation parts, runs Adam over
shuffled mini-batches, evaluates the validation split after every epoch and
returns the parameters with the lowest validation loss seen (the initial
parameters included). Runs are reproducible for a fixed (seed, config,
dataset order).

Dependencies:
- torch for optimization
- numpy for shuffling and metric inputs
- ndl for the model, loss and serialization
- metrics for validation scores
"""

import copy
import logging
import math
import os
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
import torch

from errors import DimensionError, DivergenceError, ParameterError, ValidationError
from metrics import MetricRecord, score_metrics
from ndl.core import nll_loss, predict_batch
from ndl.network import NdlHyper, NdlModel, build_model
from ndl.serialization import model_from_tensors, model_metadata, read_bundle, write_bundle
from .history import EpochRecord, TrainHistory
from .monitor import ResourceMonitor
from .split import train_val_split

logger = logging.getLogger(__name__)

TRAIN_DTYPE = torch.float32


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 64
    learning_rate: float = 1e-3
    seed: int = 0
    val_fraction: float = 0.2
    checkpoint_every: int = 10

    def __post_init__(self):
        if self.epochs < 1:
            raise ParameterError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ParameterError(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0 < self.val_fraction < 1:
            raise ParameterError(f"val_fraction must be in (0, 1), got {self.val_fraction}")
        if self.learning_rate < 0 or not math.isfinite(self.learning_rate):
            raise ParameterError(f"learning_rate must be finite and >= 0, got {self.learning_rate}")
        if self.checkpoint_every < 0:
            raise ParameterError(f"checkpoint_every must be >= 0, got {self.checkpoint_every}")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(
            epochs=int(data.get('epochs', cls.epochs)),
            batch_size=int(data.get('batch_size', cls.batch_size)),
            learning_rate=float(data.get('learning_rate', cls.learning_rate)),
            seed=int(data.get('seed', cls.seed)),
            val_fraction=float(data.get('val_fraction', cls.val_fraction)),
            checkpoint_every=int(data.get('checkpoint_every', cls.checkpoint_every)),
        )


@dataclass(frozen=True, eq=False)
class EvalResult:
    """Scores and metrics of one model on one dataset."""

    loss: float
    metrics: MetricRecord
    probs: np.ndarray
    logits: np.ndarray
    labels: np.ndarray
    alpha: Optional[np.ndarray] = None


def evaluate(model, dataset, threshold=0.5, with_alpha=False):
    """
    Score a dataset and compute loss plus the six classification metrics.

    Args:
        model: NdlModel
        dataset: SegmentDataset (nonempty)
        threshold: Probability at or above which a segment counts as positive
        with_alpha: Keep the (n, d, p) channel weights in the result
    """
    if len(dataset) == 0:
        raise ParameterError("Cannot evaluate an empty dataset")
    outputs = predict_batch(dataset.X, dataset.Z, model, with_alpha=with_alpha)
    probs, logits = outputs[0], outputs[1]
    labels = dataset.Y
    loss = float(np.mean(np.logaddexp(0.0, logits) - labels * logits))
    return EvalResult(
        loss=loss,
        metrics=score_metrics(probs, labels, threshold),
        probs=probs,
        logits=logits,
        labels=labels,
        alpha=outputs[2] if with_alpha else None,
    )


def _tensors(dataset, indices):
    return (torch.as_tensor(dataset.X[indices], dtype=TRAIN_DTYPE),
            torch.as_tensor(dataset.Z[indices], dtype=TRAIN_DTYPE),
            torch.as_tensor(dataset.Y[indices], dtype=TRAIN_DTYPE))


def _initial_model(init, hyper, dataset, seed):
    if isinstance(init, NdlModel):
        model = copy.deepcopy(init).to(TRAIN_DTYPE)
    else:
        hyper = hyper or NdlHyper(T=dataset.T, p=dataset.p)
        model = build_model(hyper, seed=seed if init is None else int(init))
    if (model.hyper.T, model.hyper.p) != (dataset.T, dataset.p):
        raise DimensionError(
            f"Model expects T={model.hyper.T}, p={model.hyper.p}; "
            f"dataset has T={dataset.T}, p={dataset.p}"
        )
    return model


def save_checkpoint(path, model, optimizer, best_state, best_val_loss, epoch, history, config):
    """Write model, Adam moments and best-so-far parameters as one bundle."""
    tensors = dict(model.state_dict())
    names = dict(model.named_parameters())
    step = 0
    for name, param in names.items():
        state = optimizer.state.get(param)
        if state:
            tensors[f"adam.exp_avg.{name}"] = state['exp_avg']
            tensors[f"adam.exp_avg_sq.{name}"] = state['exp_avg_sq']
            step = int(state['step'])
    for name, value in best_state.items():
        tensors[f"best.{name}"] = value
    metadata = model_metadata(
        model, config.to_dict(),
        kind='checkpoint',
        epoch=int(epoch),
        adam_step=step,
        best_val_loss=float(best_val_loss),
        train_config=config.to_dict(),
        history=[asdict(record) for record in history],
    )
    write_bundle(path, metadata, tensors)
    logger.info("Checkpoint written at epoch %d: %s", epoch, path)


def load_checkpoint(path, learning_rate):
    """
    Restore training state from a checkpoint.

    Returns:
        (model, optimizer, best_state, best_val_loss, epoch, history)
    """
    metadata, tensors = read_bundle(path)
    if metadata.get('kind') != 'checkpoint':
        raise ValidationError(f"{path} is a model file, not a training checkpoint")
    hyper = NdlHyper.from_dict(metadata['hyper'])
    model = model_from_tensors(hyper, tensors)
    best_model = model_from_tensors(hyper, tensors, prefix='best.')
    optimizer = torch.optim.Adam(model.parameters(), lr=learning_rate)
    step = int(metadata.get('adam_step', 0))
    if step:
        for name, param in model.named_parameters():
            optimizer.state[param] = {
                'step': torch.tensor(float(step)),
                'exp_avg': torch.from_numpy(tensors[f"adam.exp_avg.{name}"]),
                'exp_avg_sq': torch.from_numpy(tensors[f"adam.exp_avg_sq.{name}"]),
            }
    history = TrainHistory([EpochRecord(**record) for record in metadata.get('history', [])])
    return (model, optimizer, copy.deepcopy(best_model.state_dict()),
            float(metadata['best_val_loss']), int(metadata['epoch']), history)


def fit(dataset, config, init=None, hyper=None, checkpoint_dir=None, resume=None):
    """
    Train the nested model.

    Args:
        dataset: SegmentDataset with both classes in the training split
        config: TrainConfig
        init: NdlModel to start from (copied, never modified), an integer
            initialization seed, or None to use config.seed
        hyper: NdlHyper for fresh models; defaults to the dataset's T and p
        checkpoint_dir: Directory for periodic checkpoints, or None
        resume: Checkpoint base path to continue from; epoch numbering continues

    Returns:
        (NdlModel, TrainHistory): best-validation-loss parameters and the history

    Raises:
        ValidationError: Single-class training split
        DivergenceError: Non-finite training loss
    """
    if len(dataset) == 0:
        raise ParameterError("Cannot train on an empty dataset")
    train_idx, val_idx = train_val_split(len(dataset), config.val_fraction, config.seed)
    if np.unique(dataset.Y[train_idx]).size < 2:
        raise ValidationError("Training split contains a single class")
    val_set = dataset.subset(val_idx)
    X_train, Z_train, Y_train = _tensors(dataset, train_idx)

    if resume is not None:
        model, optimizer, best_state, best_val_loss, start_epoch, history = \
            load_checkpoint(resume, config.learning_rate)
        if (model.hyper.T, model.hyper.p) != (dataset.T, dataset.p):
            raise DimensionError("Checkpoint architecture does not match the dataset")
        logger.info("Resuming from %s at epoch %d", resume, start_epoch)
    else:
        model = _initial_model(init, hyper, dataset, config.seed)
        optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
        best_val_loss = evaluate(model, val_set).loss
        best_state = copy.deepcopy(model.state_dict())
        start_epoch = 0
        history = TrainHistory()
        logger.info("Initial validation loss %.5f", best_val_loss)

    monitor = ResourceMonitor()
    n_train = train_idx.size
    for epoch in range(start_epoch + 1, start_epoch + config.epochs + 1):
        model.train()
        order = np.random.default_rng([int(config.seed), 1, epoch]).permutation(n_train)
        total = 0.0
        for start in range(0, n_train, config.batch_size):
            batch = torch.as_tensor(order[start:start + config.batch_size])
            loss = nll_loss((X_train[batch], Z_train[batch], Y_train[batch]), model)
            if not torch.isfinite(loss):
                raise DivergenceError(
                    f"Non-finite training loss at epoch {epoch}, batch starting {start}; "
                    f"try a lower learning rate (now {config.learning_rate})"
                )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += loss.item() * batch.numel()
        train_loss = total / n_train

        result = evaluate(model, val_set)
        if not math.isfinite(result.loss):
            raise DivergenceError(f"Non-finite validation loss at epoch {epoch}")
        m = result.metrics
        history.append(EpochRecord(epoch=epoch, train_loss=train_loss, val_loss=result.loss,
                                   sens=m.sens, prec=m.prec, f1=m.f1, prauc=m.prauc, auc=m.auc))
        if result.loss < best_val_loss:
            best_val_loss = result.loss
            best_state = copy.deepcopy(model.state_dict())

        logger.info("epoch %d train %.5f val %.5f auc %s | %s", epoch, train_loss, result.loss,
                    'NA' if m.auc is None else f"{m.auc:.4f}", monitor.format_usage())

        if checkpoint_dir and config.checkpoint_every and epoch % config.checkpoint_every == 0:
            save_checkpoint(os.path.join(checkpoint_dir, f"checkpoint-{epoch:04d}"), model,
                            optimizer, best_state, best_val_loss, epoch, history, config)

    best = NdlModel(model.hyper)
    best.load_state_dict(best_state)
    best.eval()
    logger.info("Best validation loss %.5f", best_val_loss)
    return best, history
