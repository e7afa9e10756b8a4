"""
Record types and exceptions of the dynamics layer.
"""

from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..model.base import FrozenElement
from ..model.distribution import DenseDistribution

# Tolerance on row sums of transition and rate rows
ROW_TOLERANCE = 1e-12


class DynamicsException(Exception):
    """Base exception for dynamics errors."""
    pass


class DomainError(DynamicsException):
    """Raised when an input lies outside an operation's domain."""
    pass


class StepSizeError(DynamicsException):
    """Raised when an integration step produces negative probabilities."""
    pass


def _readonly(v: Any) -> np.ndarray:
    arr = np.array(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError(f"Row must be a vector of length >= 2, got shape {arr.shape}")
    if np.any(np.isnan(arr)):
        raise ValueError("Row contains NaN")
    arr.setflags(write=False)
    return arr


class RateRow(BaseModel):
    """One row of a per-site rate matrix Q_n(x)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    site: int = Field(..., ge=0, description="Site index n")
    current: int = Field(..., ge=0, description="Current category x_n")
    rates: np.ndarray = Field(..., description="Jump rate per category; diagonal is minus the exit rate")

    @field_validator("rates", mode="before")
    @classmethod
    def coerce_rates(cls, v: Any) -> np.ndarray:
        return _readonly(v)

    @model_validator(mode="after")
    def validate_generator(self) -> "RateRow":
        if self.current >= self.rates.size:
            raise ValueError(f"current {self.current} outside row of length {self.rates.size}")
        off = np.delete(self.rates, self.current)
        if np.any(off < 0):
            raise ValueError("Off-diagonal rates must be non-negative")
        scale = max(1.0, float(off.sum()))
        if abs(float(self.rates.sum())) > ROW_TOLERANCE * scale:
            raise ValueError(f"Rate row must sum to 0, got {self.rates.sum()!r}")
        return self

    @property
    def n_categories(self) -> int:
        return int(self.rates.size)

    @property
    def exit_rate(self) -> float:
        return float(-self.rates[self.current])


class TransitionRow(BaseModel):
    """A row of a per-site transition matrix."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    probs: np.ndarray = Field(..., description="Probability per category")
    current: Optional[int] = Field(None, ge=0, description="Row index (current category)")
    clamped: bool = Field(False, description="Diagonal was clamped and the row renormalised")

    @field_validator("probs", mode="before")
    @classmethod
    def coerce_probs(cls, v: Any) -> np.ndarray:
        arr = _readonly(v)
        if np.any(arr < 0):
            raise ValueError("Transition probabilities must be non-negative")
        if abs(float(arr.sum()) - 1.0) > ROW_TOLERANCE:
            raise ValueError(f"Transition row must sum to 1, got {arr.sum()!r}")
        return arr

    @property
    def stay_probability(self) -> float:
        if self.current is None:
            raise ValueError("Row has no current category")
        return float(self.probs[self.current])


class FullRateMatrix(FrozenElement):
    """Dense generator over an enumerated state space."""

    states: np.ndarray = Field(..., description="Enumerated states, M x N")
    Q: np.ndarray = Field(..., description="Rate matrix, M x M")
    pi: Optional[DenseDistribution] = Field(None, description="Target the matrix was built for")

    @field_validator("Q", mode="before")
    @classmethod
    def coerce_q(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"Q must be square, got shape {arr.shape}")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def validate_size(self) -> "FullRateMatrix":
        if self.states.shape[0] != self.Q.shape[0]:
            raise ValueError(
                f"{self.states.shape[0]} states but Q is {self.Q.shape[0]} x {self.Q.shape[1]}"
            )
        return self

    @property
    def size(self) -> int:
        return int(self.Q.shape[0])
