"""
Operations of the nested model on single segments and batches.

Model parameters are float32 (so saved models round-trip exactly); inference
runs on a float64 copy of the model, which keeps the normalization and
permutation invariants well inside their tolerances.

Dependencies:
- numpy for the array-facing API
- scipy.special for the logistic function
- torch for network evaluation and the differentiable loss
"""

import copy

import numpy as np
import torch
import torch.nn.functional as F
from scipy import special

from errors import DimensionError, ParameterError
from recording.types import AuxContext, MultiChannelSegment

INFERENCE_DTYPE = torch.float64
DEFAULT_BATCH = 512
# expit saturates to exactly 0 or 1 once |logit| passes about 37 (float64)
PROB_MIN = np.nextafter(0.0, 1.0)
PROB_MAX = np.nextafter(1.0, 0.0)


def _matrix(value):
    if isinstance(value, MultiChannelSegment):
        return value.X
    if isinstance(value, AuxContext):
        return value.Z
    return np.asarray(value, dtype=np.float64)


def _batch_tensor(value, dtype=INFERENCE_DTYPE):
    if isinstance(value, torch.Tensor):
        tensor = value.to(dtype)
    else:
        tensor = torch.as_tensor(np.asarray(value, dtype=np.float64), dtype=dtype)
    return tensor


def logistic(logits):
    """Logistic function kept strictly inside (0, 1)."""
    return np.clip(special.expit(logits), PROB_MIN, PROB_MAX)


def inference_model(model):
    """float64 evaluation-mode copy; the original model is left untouched."""
    return copy.deepcopy(model).to(INFERENCE_DTYPE).eval()


def omega_forward(X, model):
    """
    Weight scores of every channel.

    Args:
        X: d x T segment (array or MultiChannelSegment)
        model: NdlModel

    Returns:
        numpy.ndarray: d x p scores; row l depends only on channel l
    """
    X = _matrix(X)
    if X.ndim != 2 or X.shape[1] != model.hyper.T:
        raise DimensionError(f"X must be d x {model.hyper.T}, got {X.shape}")
    with torch.no_grad():
        scores = inference_model(model).omega(_batch_tensor(X[None]))
    return scores[0].numpy()


def compute_alpha(omega):
    """
    Column-wise softmax over channels (axis -2), max-subtracted.

    Args:
        omega: d x p (or batched ... x d x p) finite scores
    """
    omega = np.asarray(omega, dtype=np.float64)
    if omega.ndim < 2:
        raise DimensionError(f"omega must be d x p, got shape {omega.shape}")
    shifted = omega - omega.max(axis=-2, keepdims=True)
    weights = np.exp(shifted)
    return weights / weights.sum(axis=-2, keepdims=True)


def aggregate(X, Z, alpha):
    """
    Channel-weighted aggregate S (T x p).

    S = sum_l [X_l alpha_l^T + (alpha_l^T Z_l) * ones(T, p)]
    """
    X, Z, alpha = _matrix(X), _matrix(Z), np.asarray(alpha, dtype=np.float64)
    if X.ndim != 2 or Z.ndim != 2 or alpha.ndim != 2:
        raise DimensionError("X, Z and alpha must be matrices")
    d, _ = X.shape
    if Z.shape[0] != d or alpha.shape != Z.shape:
        raise DimensionError(f"Shapes disagree: X {X.shape}, Z {Z.shape}, alpha {alpha.shape}")
    return X.T @ alpha + float(np.sum(alpha * Z))


def g_forward(S, model):
    """Logit of one T x p aggregate."""
    S = np.asarray(S, dtype=np.float64)
    if S.shape != (model.hyper.T, model.hyper.p):
        raise DimensionError(f"S must be {model.hyper.T} x {model.hyper.p}, got {S.shape}")
    with torch.no_grad():
        logit = inference_model(model).g(_batch_tensor(S[None]))
    return float(logit[0])


def predict_batch(X, Z, model, batch_size=DEFAULT_BATCH, with_alpha=False):
    """
    Spike probabilities for stacked segments.

    Args:
        X: (n, d, T) segments
        Z: (n, d, p) context
        model: NdlModel
        batch_size: Segments evaluated per forward pass
        with_alpha: Also return the (n, d, p) channel weights

    Returns:
        (probs, logits) or (probs, logits, alpha) as numpy arrays
    """
    X = np.asarray(X, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.float64)
    if X.ndim != 3 or Z.ndim != 3:
        raise DimensionError(f"Expected stacked (n, d, .) arrays, got {X.shape} and {Z.shape}")
    net = inference_model(model)
    logits, alphas = [], []
    with torch.no_grad():
        for start in range(0, X.shape[0], batch_size):
            chunk_logits, chunk_alpha = net.forward_with_alpha(
                _batch_tensor(X[start:start + batch_size]),
                _batch_tensor(Z[start:start + batch_size]),
            )
            logits.append(chunk_logits.numpy())
            if with_alpha:
                alphas.append(chunk_alpha.numpy())
    logits = np.concatenate(logits) if logits else np.empty(0)
    probs = logistic(logits)
    if with_alpha:
        d, p = X.shape[1], model.hyper.p
        alpha = np.concatenate(alphas) if alphas else np.empty((0, d, p))
        return probs, logits, alpha
    return probs, logits


def predict_proba(X, Z, model):
    """Spike probability sigmoid(g(S(alpha))) of one segment."""
    X, Z = _matrix(X), _matrix(Z)
    if X.ndim != 2 or Z.ndim != 2:
        raise DimensionError("X and Z must be matrices")
    probs, _ = predict_batch(X[None], Z[None], model)
    return float(probs[0])


def nll_from_logits(logits, Y):
    """Mean of softplus(g) - Y g, evaluated without overflow."""
    return F.binary_cross_entropy_with_logits(logits, Y.to(logits.dtype), reduction='mean')


def nll_loss(batch, model):
    """
    Negative log-likelihood of a batch under the Bernoulli model.

    Args:
        batch: (X, Z, Y) with X (n, d, T), Z (n, d, p), Y (n,) in {0, 1}
        model: NdlModel; the loss is computed in the model's dtype and is differentiable

    Returns:
        torch.Tensor: Scalar loss >= 0
    """
    X, Z, Y = batch
    dtype = next(model.parameters()).dtype
    X, Z, Y = _batch_tensor(X, dtype), _batch_tensor(Z, dtype), _batch_tensor(Y, dtype)
    if Y.numel() == 0:
        raise ParameterError("Loss needs a nonempty batch")
    if not torch.all((Y == 0) | (Y == 1)):
        raise ParameterError("Labels must be 0 or 1")
    return nll_from_logits(model(X, Z), Y.reshape(-1))


def channel_importance(alpha):
    """Row sums 1^T alpha_l; they add up to p over channels."""
    return np.asarray(alpha, dtype=np.float64).sum(axis=-1)


def top_channels(importance, L):
    """
    The L most important channels, descending; ties go to the lower index.

    Returns:
        list of (channel index, importance)
    """
    importance = np.asarray(importance, dtype=np.float64).reshape(-1)
    if not 1 <= L <= importance.size:
        raise ParameterError(f"L must be in 1..{importance.size}, got {L}")
    order = np.lexsort((np.arange(importance.size), -importance))[:L]
    return [(int(i), float(importance[i])) for i in order]
