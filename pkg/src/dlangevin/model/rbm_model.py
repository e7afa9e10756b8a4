"""
Restricted Boltzmann machine with categorical visible units.

The binary hidden layer is summed out, so the sampler works with the free
energy of the visible units:

    f(v) = -sum_n theta[n, v_n] - sum_m softplus(beta_m + sum_n W[m, n, v_n])
"""

from typing import Any, Literal

import numpy as np
from pydantic import Field, field_validator, model_validator
from scipy.special import expit

from .base import EnergyModel, ModelParams, as_float_array
from .types import ModelFamily


def softplus(z: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, z)


class RbmParams(ModelParams):
    """Visible biases, hidden biases and the M x N x C coupling tensor."""

    family: Literal[ModelFamily.RBM] = ModelFamily.RBM
    theta_vis: np.ndarray = Field(..., description="Visible biases, N x C")
    beta: np.ndarray = Field(..., description="Hidden biases, length M")
    weights: np.ndarray = Field(..., description="Couplings, M x N x C")

    @field_validator("theta_vis", mode="before")
    @classmethod
    def validate_theta(cls, v: Any) -> np.ndarray:
        return as_float_array(v, 2, "theta_vis")

    @field_validator("beta", mode="before")
    @classmethod
    def validate_beta(cls, v: Any) -> np.ndarray:
        return as_float_array(v, 1, "beta")

    @field_validator("weights", mode="before")
    @classmethod
    def validate_weights(cls, v: Any) -> np.ndarray:
        return as_float_array(v, 3, "weights")

    @model_validator(mode="after")
    def validate_shapes(self) -> "RbmParams":
        n, c = self.theta_vis.shape
        if n < 1 or c < 2:
            raise ValueError(f"theta_vis must be N x C with C >= 2, got {(n, c)}")
        expected = (self.beta.shape[0], n, c)
        if self.weights.shape != expected:
            raise ValueError(f"weights must be {expected}, got {self.weights.shape}")
        return self

    @property
    def n_visible(self) -> int:
        return int(self.theta_vis.shape[0])

    @property
    def n_hidden(self) -> int:
        return int(self.beta.shape[0])

    @property
    def n_sites(self) -> int:
        return self.n_visible

    @property
    def n_categories(self) -> int:
        return int(self.theta_vis.shape[1])


class RbmModel(EnergyModel[RbmParams]):
    """Free-energy RBM; the exact table reuses the hidden activations."""

    def _activations(self, X: np.ndarray) -> np.ndarray:
        p = self.params
        gathered = p.weights[:, np.arange(self.n_sites), X]
        return gathered.sum(axis=-1).T + p.beta

    def _energies(self, X: np.ndarray) -> np.ndarray:
        p = self.params
        unary = p.theta_vis[np.arange(self.n_sites), X].sum(axis=1)
        return -unary - softplus(self._activations(X)).sum(axis=1)

    def _log_ratio_table(self, x: np.ndarray) -> np.ndarray:
        p = self.params
        sites = np.arange(self.n_sites)
        act = self._activations(x[None, :])[0]
        shift = p.weights - p.weights[:, sites, x][:, :, None]
        hidden = softplus(act[:, None, None] + shift).sum(axis=0)
        local = p.theta_vis + hidden
        return local - local[sites, x][:, None]

    def _energy_gradient(self, onehot: np.ndarray) -> np.ndarray:
        p = self.params
        act = np.einsum("mnc,nc->m", p.weights, onehot) + p.beta
        return -p.theta_vis - np.einsum("m,mnc->nc", expit(act), p.weights)
