"""
Bernoulli (factorized categorical) model.

f(x) = sum_n theta[n, x_n]; every site is independent.
"""

from typing import Any, Literal

import numpy as np
from pydantic import Field, field_validator

from .base import EnergyModel, ModelParams, as_float_array
from .types import ModelFamily


class BernoulliParams(ModelParams):
    """Per-site unary potentials theta, shape N x C."""

    family: Literal[ModelFamily.BERNOULLI] = ModelFamily.BERNOULLI
    theta: np.ndarray = Field(..., description="Unary potentials, N x C")

    @field_validator("theta", mode="before")
    @classmethod
    def validate_theta(cls, v: Any) -> np.ndarray:
        arr = as_float_array(v, 2, "theta")
        if arr.shape[0] < 1 or arr.shape[1] < 2:
            raise ValueError(f"theta must be N x C with N >= 1, C >= 2, got {arr.shape}")
        return arr

    @property
    def n_sites(self) -> int:
        return int(self.theta.shape[0])

    @property
    def n_categories(self) -> int:
        return int(self.theta.shape[1])


class BernoulliModel(EnergyModel[BernoulliParams]):
    """Independent sites; the linear energy makes gradient ratios exact."""

    def _energies(self, X: np.ndarray) -> np.ndarray:
        theta = self.params.theta
        return theta[np.arange(self.n_sites), X].sum(axis=1)

    def _log_ratio_table(self, x: np.ndarray) -> np.ndarray:
        theta = self.params.theta
        current = theta[np.arange(self.n_sites), x]
        return -(theta - current[:, None])

    def _energy_gradient(self, onehot: np.ndarray) -> np.ndarray:
        return np.array(self.params.theta)

    def exact_marginals(self) -> np.ndarray:
        """Closed-form per-site target, softmax(-theta_n), shape N x C."""
        logits = -self.params.theta
        logits = logits - logits.max(axis=1, keepdims=True)
        w = np.exp(logits)
        return w / w.sum(axis=1, keepdims=True)
