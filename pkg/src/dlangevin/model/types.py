"""
Custom types and enums for energy models and samplers.

Defines common enumerations and type aliases used across the package.
"""

from enum import Enum
from typing import Sequence, Union

import numpy as np


class ModelFamily(str, Enum):
    """Energy model families shipped in the model zoo."""
    BERNOULLI = "bernoulli"
    ISING = "ising"
    FHMM = "fhmm"
    RBM = "rbm"


class WeightKind(str, Enum):
    """Locally balanced weight functions."""
    SQRT = "sqrt"
    BARKER = "barker"


class RatioSource(str, Enum):
    """Where per-site log-probability ratios come from."""
    EXACT = "exact"
    GRADIENT = "gradient"


class SamplerKind(str, Enum):
    """MCMC kernels available to the harness."""
    RWM = "rwm"
    BLOCK_GIBBS = "block_gibbs"
    HAMMING_BALL = "hamming_ball"
    GWG = "gwg"
    PAS = "pas"
    DMALA = "dmala"
    DLMCF = "dlmcf"
    DLMC = "dlmc"


class Scale(str, Enum):
    """Preset scale: full benchmark dimensions or a shrunk desk-top variant."""
    PAPER = "paper"
    DESK = "desk"


class TuningStatus(str, Enum):
    """Outcome of acceptance-rate tuning."""
    CONVERGED = "converged"
    SATURATED = "saturated"
    FAILED = "failed"
    SKIPPED = "skipped"


# Type aliases for common patterns
StateLike = Union["State", np.ndarray, Sequence[int]]  # noqa: F821
ArrayLike = Union[np.ndarray, Sequence[float]]

# Largest state space the oracles will enumerate
DEFAULT_ENUMERATION_CAP = 2 ** 16
