"""
Sample-size convergence study.

With one fixed truth, models are trained for every (n, seed) pair and scored
on a shared held-out set: recovery errors of the channel weights and of the
probability, trained AUC and the AUC of the true probabilities.

CSV header: n,seed,mae_alpha,mae_g,auc,oracle_auc

Dependencies:
- numpy for summaries
- training for fit and evaluate
"""

import csv
import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from errors import ParameterError, UndefinedMetricError
from metrics import mae_alpha, mae_g, roc_auc
from metrics.report import format_value, parse_value
from training import evaluate, fit
from .generator import TEST_STREAM, build_truth, g_star_batch, sample_dataset, truth_rng

logger = logging.getLogger(__name__)

CONVERGENCE_FIELDS = ('n', 'seed', 'mae_alpha', 'mae_g', 'auc', 'oracle_auc')


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    seed: int
    mae_alpha: float
    mae_g: float
    auc: Optional[float]
    oracle_auc: Optional[float]


def oracle_auc(sim):
    """AUC of the true probabilities against the drawn labels (None for one class)."""
    try:
        return roc_auc(sim.g_star, sim.dataset.Y)
    except UndefinedMetricError:
        return None


def recovery_errors(sim, result):
    """
    (MAE of alpha*, MAE of g*) for an EvalResult computed with channel weights.

    Both probabilities in the g* error are taken at the estimated aggregate
    S(alpha-hat): the true link applied to it against the fitted model.
    """
    X, Z = sim.dataset.X, sim.dataset.Z
    truth_at_estimate = g_star_batch(X, Z, result.alpha, sim.truth)
    return mae_alpha(sim.alpha_star, result.alpha), mae_g(truth_at_estimate, result.probs)


def run_convergence(sim_config, train_config, n_values, seeds, n_test, hyper=None):
    """
    Train and score one model per (n, seed).

    Args:
        sim_config: SimConfig; its seed fixes the truth and the test set
        train_config: TrainConfig; its seed is replaced by each repeat seed
        n_values: Training set sizes
        seeds: Repeat seeds
        n_test: Held-out set size
        hyper: Optional NdlHyper

    Returns:
        list of ConvergenceRow in (n, seed) order
    """
    if not n_values or not seeds:
        raise ParameterError("Convergence sweep needs at least one n and one seed")
    truth = build_truth(sim_config, truth_rng(sim_config.seed))
    test = sample_dataset(sim_config, truth, n=n_test, stream=TEST_STREAM)
    baseline = oracle_auc(test)

    rows = []
    for n in n_values:
        for seed in seeds:
            train = sample_dataset(sim_config, truth, n=n, seed=seed)
            model, _ = fit(train.dataset, replace(train_config, seed=int(seed)), hyper=hyper)
            result = evaluate(model, test.dataset, with_alpha=True)
            err_alpha, err_g = recovery_errors(test, result)
            row = ConvergenceRow(n=int(n), seed=int(seed), mae_alpha=err_alpha, mae_g=err_g,
                                 auc=result.metrics.auc, oracle_auc=baseline)
            logger.info("n=%d seed=%d mae_alpha=%.4f mae_g=%.4f", n, seed, err_alpha, err_g)
            rows.append(row)
    return rows


def write_convergence_csv(path, rows):
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(CONVERGENCE_FIELDS)
        for row in rows:
            writer.writerow([row.n, row.seed] + [format_value(getattr(row, name))
                                                 for name in CONVERGENCE_FIELDS[2:]])


def read_convergence_csv(path):
    rows = []
    with open(path, 'r', newline='') as f:
        for record in csv.DictReader(f):
            values = {name: parse_value(record[name]) for name in CONVERGENCE_FIELDS[2:]}
            rows.append(ConvergenceRow(n=int(record['n']), seed=int(record['seed']), **values))
    return rows


def mae_table(rows):
    """
    One summary row per n, ascending.

    Returns:
        list of dicts: n, repeats, median/mean of mae_alpha and mae_g
    """
    table = []
    for n in sorted({row.n for row in rows}):
        group = [row for row in rows if row.n == n]
        alpha = np.array([row.mae_alpha for row in group])
        g = np.array([row.mae_g for row in group])
        table.append({
            'n': n,
            'repeats': len(group),
            'median_mae_alpha': float(np.median(alpha)),
            'mean_mae_alpha': float(np.mean(alpha)),
            'median_mae_g': float(np.median(g)),
            'mean_mae_g': float(np.mean(g)),
        })
    return table
