"""
Simulation settings.

Dependencies: None
"""

from dataclasses import asdict, dataclass
from typing import Tuple

from errors import ParameterError

SYNTHETIC = 'synthetic'


@dataclass(frozen=True)
class SimConfig:
    """
    Sizes and seeds of one simulation run.

    Attributes:
        d: Channels
        T: Segment length in samples
        p: Context length in samples (even)
        n: Number of samples
        seed: Seed of the per-sample random streams
        base_source: SYNTHETIC or a path to an NDLR recording
        ar_coeffs: AR(2) coefficients of the synthetic base signal
        fs: Sampling rate given to continuous recordings
    """

    d: int = 22
    T: int = 64
    p: int = 64
    n: int = 2048
    seed: int = 0
    base_source: str = SYNTHETIC
    ar_coeffs: Tuple[float, float] = (1.3, -0.4)
    fs: float = 256.0

    def __post_init__(self):
        if self.d < 1:
            raise ParameterError(f"d must be >= 1, got {self.d}")
        if self.T < 2:
            raise ParameterError(f"T must be >= 2, got {self.T}")
        if self.p < 2 or self.p % 2:
            raise ParameterError(f"p must be even and >= 2, got {self.p}")
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        if len(self.ar_coeffs) != 2:
            raise ParameterError(f"ar_coeffs needs two coefficients, got {self.ar_coeffs}")
        object.__setattr__(self, 'ar_coeffs', tuple(float(a) for a in self.ar_coeffs))

    @property
    def width(self):
        return self.T + self.p

    @property
    def synthetic(self):
        return self.base_source in (None, '', SYNTHETIC)

    def to_dict(self):
        values = asdict(self)
        values['ar_coeffs'] = list(self.ar_coeffs)
        return values

    @classmethod
    def from_dict(cls, data):
        """Build from a config section; unrelated keys in the section are ignored."""
        defaults = cls()
        return cls(
            d=int(data.get('d', defaults.d)),
            T=int(data.get('T', defaults.T)),
            p=int(data.get('p', defaults.p)),
            n=int(data.get('n', defaults.n)),
            seed=int(data.get('seed', defaults.seed)),
            base_source=data.get('base_source') or SYNTHETIC,
            ar_coeffs=tuple(data.get('ar_coeffs', defaults.ar_coeffs)),
            fs=float(data.get('fs', defaults.fs)),
        )
