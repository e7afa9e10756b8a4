"""
Factorial hidden Markov model.

K independent categorical chains of length L emit one Gaussian observation
per time step:

    p(x)   = prod_k p(x_{1,k}) prod_l p(x_{l,k} | x_{l-1,k})
    p(y|x) = prod_l N(y_l; sum_k W[k, x_{l,k}] + b, sigma^2)

The sampled variable is the hidden state flattened row-major to N = L * K
sites (site n = l * K + k). The energy is -log p(x) - log p(y|x) without the
Gaussian normalising constant.
"""

from typing import Any, Literal, Optional
import logging

import numpy as np
from pydantic import Field, field_validator, model_validator
from scipy.special import log_softmax, softmax

from .base import EnergyModel, ModelParams, ShapeError, as_float_array
from .types import ModelFamily


class FhmmParams(ModelParams):
    """Chain logits, emission weights and (optionally) the observations."""

    family: Literal[ModelFamily.FHMM] = ModelFamily.FHMM
    length: int = Field(..., ge=1, description="Number of time steps L")
    factors: int = Field(..., ge=1, description="Number of hidden chains K")
    init_logits: np.ndarray = Field(..., description="Initial logits, K x C")
    transition_logits: np.ndarray = Field(..., description="Transition logits, K x C x C")
    W: np.ndarray = Field(..., description="Emission weights, K x C")
    b: float = Field(0.0, description="Emission bias")
    sigma: float = Field(..., gt=0, description="Emission standard deviation")
    observations: Optional[np.ndarray] = Field(None, description="Observed y, length L")

    @field_validator("init_logits", "W", mode="before")
    @classmethod
    def validate_matrix(cls, v: Any, info: Any) -> np.ndarray:
        return as_float_array(v, 2, info.field_name)

    @field_validator("transition_logits", mode="before")
    @classmethod
    def validate_transitions(cls, v: Any) -> np.ndarray:
        return as_float_array(v, 3, "transition_logits")

    @field_validator("observations", mode="before")
    @classmethod
    def validate_observations(cls, v: Any) -> Optional[np.ndarray]:
        if v is None:
            return None
        return as_float_array(v, 1, "observations")

    @model_validator(mode="after")
    def validate_shapes(self) -> "FhmmParams":
        k, c = self.init_logits.shape
        if k != self.factors or c < 2:
            raise ValueError(
                f"init_logits must be {self.factors} x C (C >= 2), got {self.init_logits.shape}"
            )
        if self.transition_logits.shape != (k, c, c):
            raise ValueError(
                f"transition_logits must be {(k, c, c)}, got {self.transition_logits.shape}"
            )
        if self.W.shape != (k, c):
            raise ValueError(f"W must be {(k, c)}, got {self.W.shape}")
        if self.observations is not None and self.observations.shape != (self.length,):
            raise ValueError(
                f"observations must have length {self.length}, "
                f"got {self.observations.shape}"
            )
        return self

    @property
    def n_sites(self) -> int:
        return self.length * self.factors

    @property
    def n_categories(self) -> int:
        return int(self.init_logits.shape[1])

    def with_observations(self, observations: np.ndarray) -> "FhmmParams":
        """Copy of these parameters carrying the given observations."""
        data = self.model_dump(by_alias=True)
        data["observations"] = observations
        return FhmmParams(**data)


def fhmm_generate_observations(params: FhmmParams, seed: int) -> np.ndarray:
    """
    Sample y from the generative model.

    Draws the hidden chains from p(x), then y_l from the Gaussian emission.
    Deterministic given the seed.

    Args:
        params: FHMM parameters (observations are ignored)
        seed: RNG seed

    Returns:
        Observation vector of length L
    """
    rng = np.random.default_rng(seed)
    k_idx = np.arange(params.factors)
    init = softmax(params.init_logits, axis=-1)
    trans = softmax(params.transition_logits, axis=-1)
    z = np.empty((params.length, params.factors), dtype=np.int64)
    for k in k_idx:
        z[0, k] = rng.choice(params.n_categories, p=init[k])
    for l in range(1, params.length):
        for k in k_idx:
            z[l, k] = rng.choice(params.n_categories, p=trans[k, z[l - 1, k]])
    mean = params.W[k_idx, z].sum(axis=1) + params.b
    return mean + params.sigma * rng.standard_normal(params.length)


class FhmmModel(EnergyModel[FhmmParams]):
    """Posterior over hidden chains given the stored observations."""

    def __init__(self, params: FhmmParams, logger: Optional[logging.Logger] = None):
        if params.observations is None:
            raise ShapeError("FHMM model needs observations; generate or load them first")
        super().__init__(params, logger)
        self._log_init = log_softmax(params.init_logits, axis=-1)
        self._log_trans = log_softmax(params.transition_logits, axis=-1)
        self._k = np.arange(params.factors)

    def _grid(self, x: np.ndarray) -> np.ndarray:
        return x.reshape(self.params.length, self.params.factors)

    def _means(self, Z: np.ndarray) -> np.ndarray:
        return self.params.W[self._k, Z].sum(axis=-1) + self.params.b

    def _energies(self, X: np.ndarray) -> np.ndarray:
        p = self.params
        Z = X.reshape(X.shape[0], p.length, p.factors)
        logp = self._log_init[self._k, Z[:, 0]].sum(axis=1)
        if p.length > 1:
            logp = logp + self._log_trans[self._k, Z[:, :-1], Z[:, 1:]].sum(axis=(1, 2))
        resid = p.observations - self._means(Z)
        return -logp + (resid ** 2).sum(axis=1) / (2.0 * p.sigma ** 2)

    def _log_ratio_table(self, x: np.ndarray) -> np.ndarray:
        p = self.params
        Z = self._grid(x)
        c = p.n_categories
        local = np.zeros((p.length, p.factors, c))
        local[0] += self._log_init
        if p.length > 1:
            # transition into (l, k) from l-1, and out of (l, k) into l+1
            local[1:] += self._log_trans[self._k, Z[:-1]]
            local[:-1] += self._log_trans[self._k, :, Z[1:]]
        resid = p.observations - self._means(Z)
        current_w = p.W[self._k, Z]
        shift = p.W[None, :, :] - current_w[:, :, None]
        local -= (resid[:, None, None] - shift) ** 2 / (2.0 * p.sigma ** 2)
        current = np.take_along_axis(local, Z[:, :, None], axis=2)
        return (local - current).reshape(self.n_sites, c)

    def _energy_gradient(self, onehot: np.ndarray) -> np.ndarray:
        p = self.params
        X = onehot.reshape(p.length, p.factors, p.n_categories)
        grad = np.zeros_like(X)
        grad[0] -= self._log_init
        if p.length > 1:
            grad[1:] -= np.einsum("kij,lki->lkj", self._log_trans, X[:-1])
            grad[:-1] -= np.einsum("kij,lkj->lki", self._log_trans, X[1:])
        mean = np.einsum("kc,lkc->l", p.W, X) + p.b
        resid = p.observations - mean
        grad -= (resid / p.sigma ** 2)[:, None, None] * p.W[None, :, :]
        return grad.reshape(self.n_sites, p.n_categories)
