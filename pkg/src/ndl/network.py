"""
Network definitions for the nested model.

Two blocks share one pattern: a series of 1-D convolution layers with ReLU and
stride-2 downsampling, followed by a fully connected layer.

- omega_net maps every channel signal (length T) to p weight scores. Its
  parameters are shared across channels, so they do not depend on d.
- g_net maps the T x p aggregate, read as a length-T sequence with p features,
  to one logit.

Dependencies:
- torch for layers and autograd
"""

from dataclasses import asdict, dataclass
from typing import Tuple

import torch
from torch import nn

from errors import DimensionError, ParameterError


@dataclass(frozen=True)
class NdlHyper:
    """Architecture hyperparameters."""

    T: int = 64
    p: int = 64
    omega_widths: Tuple[int, ...] = (16, 32, 64)
    g_widths: Tuple[int, ...] = (16, 32, 64)
    kernel_size: int = 3
    stride: int = 2

    def __post_init__(self):
        object.__setattr__(self, 'omega_widths', tuple(int(w) for w in self.omega_widths))
        object.__setattr__(self, 'g_widths', tuple(int(w) for w in self.g_widths))
        if self.T < 1 or self.p < 1:
            raise ParameterError(f"T and p must be >= 1, got T={self.T}, p={self.p}")
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise ParameterError(f"kernel_size must be odd, got {self.kernel_size}")
        if self.stride < 1:
            raise ParameterError(f"stride must be >= 1, got {self.stride}")
        if any(w < 1 for w in self.omega_widths + self.g_widths):
            raise ParameterError("Layer widths must be >= 1")

    def to_dict(self):
        data = asdict(self)
        data['omega_widths'] = list(self.omega_widths)
        data['g_widths'] = list(self.g_widths)
        return data

    @classmethod
    def from_dict(cls, data):
        known = {k: data[k] for k in ('T', 'p', 'omega_widths', 'g_widths', 'kernel_size', 'stride')
                 if k in data}
        return cls(**known)


def conv_output_length(length, kernel_size, stride):
    """Length after one same-padded strided convolution."""
    padding = kernel_size // 2
    return (length + 2 * padding - kernel_size) // stride + 1


class ConvBlock(nn.Module):
    """Recursive convolution layers followed by a fully connected layer."""

    def __init__(self, in_channels, length, widths, out_features, kernel_size=3, stride=2):
        super().__init__()
        layers = []
        channels = in_channels
        for width in widths:
            layers.append(nn.Conv1d(channels, width, kernel_size, stride=stride,
                                    padding=kernel_size // 2))
            layers.append(nn.ReLU())
            channels = width
            length = conv_output_length(length, kernel_size, stride)
        self.convs = nn.Sequential(*layers)
        self.fc = nn.Linear(channels * length, out_features)

    def forward(self, x):
        return self.fc(self.convs(x).flatten(start_dim=1))


class NdlModel(nn.Module):
    """
    Nested model: omega network, softmax over channels, aggregation, g network.

    Inputs are batched: X is (B, d, T), Z is (B, d, p). d may differ between
    calls but not within a batch.
    """

    def __init__(self, hyper=None):
        super().__init__()
        self.hyper = hyper or NdlHyper()
        h = self.hyper
        self.omega_net = ConvBlock(1, h.T, h.omega_widths, h.p, h.kernel_size, h.stride)
        self.g_net = ConvBlock(h.p, h.T, h.g_widths, 1, h.kernel_size, h.stride)

    def _check(self, X, Z=None):
        if X.dim() != 3 or X.shape[-1] != self.hyper.T:
            raise DimensionError(f"X must be (B, d, {self.hyper.T}), got {tuple(X.shape)}")
        if Z is not None and (Z.dim() != 3 or Z.shape[:2] != X.shape[:2]
                              or Z.shape[-1] != self.hyper.p):
            raise DimensionError(
                f"Z must be (B, d, {self.hyper.p}) matching X {tuple(X.shape)}, got {tuple(Z.shape)}"
            )

    def omega(self, X):
        """(B, d, T) -> (B, d, p) weight scores, channel by channel."""
        self._check(X)
        batch, d, T = X.shape
        scores = self.omega_net(X.reshape(batch * d, 1, T))
        return scores.reshape(batch, d, self.hyper.p)

    def alpha(self, X):
        """(B, d, T) -> (B, d, p) channel weights; each column sums to 1 over d."""
        return softmax_channels(self.omega(X))

    def g(self, S):
        """(B, T, p) aggregate -> (B,) logits."""
        if S.dim() != 3 or S.shape[1:] != (self.hyper.T, self.hyper.p):
            raise DimensionError(
                f"S must be (B, {self.hyper.T}, {self.hyper.p}), got {tuple(S.shape)}"
            )
        return self.g_net(S.transpose(1, 2)).squeeze(-1)

    def forward(self, X, Z):
        """Logits for a batch of (X, Z) pairs."""
        self._check(X, Z)
        alpha = self.alpha(X)
        return self.g(aggregate_batch(X, Z, alpha))

    def forward_with_alpha(self, X, Z):
        """Logits and channel weights in one pass."""
        self._check(X, Z)
        alpha = self.alpha(X)
        return self.g(aggregate_batch(X, Z, alpha)), alpha


def softmax_channels(omega):
    """Softmax over the channel axis (-2); torch subtracts the max internally."""
    return torch.softmax(omega, dim=-2)


def aggregate_batch(X, Z, alpha):
    """
    S = sum_l [X_l alpha_l^T + (alpha_l^T Z_l) 1_T 1_p^T] for (B, d, .) inputs.

    Returns (B, T, p).
    """
    weighted = torch.matmul(X.transpose(-1, -2), alpha)
    context = (alpha * Z).sum(dim=(-1, -2))
    return weighted + context[..., None, None]


def init_params(model, generator):
    """
    Fan-in scaled uniform weights, zero shifts (biases).

    Args:
        model: NdlModel to initialize in place
        generator: torch.Generator seeding the draw
    """
    with torch.no_grad():
        for module in model.modules():
            if isinstance(module, (nn.Conv1d, nn.Linear)):
                fan_in = module.weight[0].numel()
                bound = (1.0 / fan_in) ** 0.5
                module.weight.uniform_(-bound, bound, generator=generator)
                if module.bias is not None:
                    module.bias.zero_()
    return model


def build_model(hyper=None, seed=0):
    """Create a freshly initialized NdlModel."""
    generator = torch.Generator().manual_seed(int(seed))
    return init_params(NdlModel(hyper), generator)
