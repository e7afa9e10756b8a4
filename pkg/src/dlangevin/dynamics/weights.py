"""
Locally balanced weight functions, evaluated in the log domain.

A weight g is locally balanced when g(t) = t * g(1/t). Both shipped kinds
take and return logarithms so ratios never leave log space:

    sqrt:   log g(t) = 0.5 * log t
    barker: log g(t) = log t - log(1 + t) = -log(1 + 1/t)
"""

from typing import Union

import numpy as np
from pydantic import Field

from ..model.base import FrozenElement
from ..model.types import WeightKind
from .base import DomainError


def log_g(kind: Union[WeightKind, str], log_t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Log of the weight function applied to a ratio given by its log.

    Args:
        kind: Weight function kind
        log_t: Log ratio (scalar or array); -inf maps to -inf

    Returns:
        log g(exp(log_t)), same shape as the input

    Raises:
        DomainError: On NaN input
    """
    arr = np.asarray(log_t, dtype=np.float64)
    if np.any(np.isnan(arr)):
        raise DomainError("log_g received NaN")
    kind = WeightKind(kind)
    if kind is WeightKind.SQRT:
        out = 0.5 * arr
    else:
        out = -np.logaddexp(0.0, -arr)
    if np.ndim(log_t) == 0:
        return float(out)
    return out


class WeightFunction(FrozenElement):
    """A locally balanced weight g, called on log ratios."""

    kind: WeightKind = Field(WeightKind.SQRT, description="Weight function kind")

    def __call__(self, log_t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        return log_g(self.kind, log_t)

    @property
    def log_g_at_one(self) -> float:
        """log g(1): 0 for sqrt, log(1/2) for barker."""
        return float(log_g(self.kind, 0.0))
