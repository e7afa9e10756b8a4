"""
Dense distributions over fully enumerated state spaces.

States are ordered row-major (site 0 is the most significant digit), the
same order np.ravel_multi_index uses, so histograms and oracles agree.
"""

from typing import Any, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from .base import BaseElement

# Tolerance on the total mass of a dense distribution
MASS_TOLERANCE = 1e-12


def enumerate_states(n_sites: int, n_categories: int) -> np.ndarray:
    """All C^N states as a (C^N, N) int array in row-major order."""
    grids = np.indices((n_categories,) * n_sites).reshape(n_sites, -1)
    return grids.T.astype(np.int64)


def state_index(X: np.ndarray, n_categories: int) -> np.ndarray:
    """Row-major index of each state in a (B, N) batch (or a single state)."""
    X = np.asarray(X, dtype=np.int64)
    dims = (n_categories,) * X.shape[-1]
    if X.ndim == 1:
        return np.asarray(np.ravel_multi_index(tuple(X), dims))
    return np.ravel_multi_index(tuple(X.T), dims)


def index_state(index: int, n_sites: int, n_categories: int) -> np.ndarray:
    """Inverse of state_index for a single state."""
    return np.array(np.unravel_index(index, (n_categories,) * n_sites), dtype=np.int64)


class DenseDistribution(BaseElement):
    """
    Probability vector over an enumerated state space.

    Used only by oracles on tiny models (C^N below the enumeration cap).
    """

    probs: np.ndarray = Field(..., description="Probability per enumerated state")
    n_sites: Optional[int] = Field(None, ge=1, description="N, when known")
    n_categories: Optional[int] = Field(None, ge=2, description="C, when known")

    @field_validator("probs", mode="before")
    @classmethod
    def coerce_probs(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError(f"probs must be a non-empty vector, got shape {arr.shape}")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("probs must be finite and non-negative")
        if abs(arr.sum() - 1.0) > MASS_TOLERANCE:
            raise ValueError(f"probs must sum to 1, got {arr.sum()!r}")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def validate_space(self) -> "DenseDistribution":
        if self.n_sites is not None and self.n_categories is not None:
            expected = self.n_categories ** self.n_sites
            if expected != self.probs.size:
                raise ValueError(
                    f"Expected {expected} probabilities for C^N, got {self.probs.size}"
                )
        return self

    @property
    def size(self) -> int:
        return int(self.probs.size)

    def marginals(self) -> np.ndarray:
        """Per-site marginals, shape (N, C)."""
        if self.n_sites is None or self.n_categories is None:
            raise ValueError("Marginals need n_sites and n_categories")
        states = enumerate_states(self.n_sites, self.n_categories)
        out = np.zeros((self.n_sites, self.n_categories))
        for n in range(self.n_sites):
            out[n] = np.bincount(
                states[:, n], weights=self.probs, minlength=self.n_categories
            )
        return out

    def argmax_state(self) -> np.ndarray:
        if self.n_sites is None or self.n_categories is None:
            raise ValueError("argmax_state needs n_sites and n_categories")
        return index_state(int(np.argmax(self.probs)), self.n_sites, self.n_categories)

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Draw state indices i.i.d. from the distribution."""
        return rng.choice(self.size, size=size, p=self.probs)
