"""
Base models for all energy models.

Provides the common pydantic base classes, the State type, the per-chain
energy-evaluation counter and the abstract EnergyModel interface.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Generic, Optional, TypeVar
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .types import DEFAULT_ENUMERATION_CAP, ModelFamily, StateLike


class ModelException(Exception):
    """Base exception for energy model errors."""
    pass


class ShapeError(ModelException):
    """Raised when a state or parameter array has the wrong shape or range."""
    pass


class SiteIndexError(ModelException):
    """Raised when a site index lies outside [0, N)."""
    pass


class CapacityError(ModelException):
    """Raised when a state space is too large to enumerate."""
    pass


class BaseElement(BaseModel):
    """
    Base class for all record types.

    Allows numpy arrays as fields and carries free-form metadata.
    """

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        str_strip_whitespace=True,
    )

    description: Optional[str] = Field(None, description="Element description")
    metadata: Dict[str, Any] = Field(
        default_factory=dict,
        description="Additional metadata"
    )


class FrozenElement(BaseElement):
    """Immutable element; numpy fields are made read-only by the subclasses."""

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        str_strip_whitespace=True,
        frozen=True,
    )


def as_float_array(value: Any, ndim: int, name: str) -> np.ndarray:
    """
    Coerce a nested list or array to a read-only float64 array.

    Args:
        value: Array-like input
        ndim: Required number of dimensions
        name: Field name used in error messages

    Returns:
        Read-only float64 array

    Raises:
        ValueError: If the dimension is wrong or entries are not finite
    """
    arr = np.array(value, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"'{name}' must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"'{name}' contains non-finite entries")
    arr.setflags(write=False)
    return arr


class State(BaseModel):
    """
    A point of the state space C^N.

    Values are plain category indices; one-hot embeddings only exist inside
    gradient computations.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray = Field(..., description="Category index per site")
    n_categories: int = Field(..., ge=2, description="Number of categories C")

    @field_validator("values", mode="before")
    @classmethod
    def coerce_values(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError(f"State must be a non-empty vector, got shape {arr.shape}")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def validate_range(self) -> "State":
        if self.values.min() < 0 or self.values.max() >= self.n_categories:
            raise ValueError(
                f"State entries must lie in [0, {self.n_categories})"
            )
        return self

    @property
    def dimension(self) -> int:
        """Number of sites N."""
        return int(self.values.shape[0])

    def __str__(self) -> str:
        return f"State({self.values.tolist()})"


class EvalCounter:
    """
    Per-chain tally of energy evaluations.

    Owned by the caller, never by the shared model. One call to energy,
    one exact-ratio sweep and one gradient each count as one evaluation.
    """

    __slots__ = ("count",)

    def __init__(self, count: int = 0):
        self.count = count

    def add(self, k: int = 1) -> None:
        self.count += k

    def __repr__(self) -> str:
        return f"EvalCounter(count={self.count})"


class LocalRatios(BaseModel):
    """Exact log-probability changes from moving a single site."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    site: int = Field(..., ge=0, description="Site index n")
    current: int = Field(..., ge=0, description="Current category x_n")
    log_ratios: np.ndarray = Field(
        ...,
        description="Entry j = log pi(x with site n := j) - log pi(x)"
    )


class ModelParams(FrozenElement):
    """Common interface of every parameter set."""

    family: ModelFamily

    @property
    def n_sites(self) -> int:
        raise NotImplementedError

    @property
    def n_categories(self) -> int:
        raise NotImplementedError


P = TypeVar("P", bound=ModelParams)


class EnergyModel(ABC, Generic[P]):
    """
    Abstract base class for all energy models.

    The target is pi(x) proportional to exp(-f(x)). Subclasses implement:
    - _energies(): batched energy over a (B, N) stack of states
    - _log_ratio_table(): exact per-site conditional log-ratios, N x C
    - _energy_gradient(): gradient of the relaxed energy at a one-hot point

    Models are immutable and may be shared by concurrent chains; every
    public method takes the caller's EvalCounter.
    """

    def __init__(self, params: P, logger: Optional[logging.Logger] = None):
        """
        Initialize model.

        Args:
            params: Validated parameter set
            logger: Optional logger instance. If None, creates default logger.
        """
        self.params = params
        self.logger = logger or logging.getLogger(self.__class__.__name__)

    @property
    def family(self) -> ModelFamily:
        return self.params.family

    @property
    def n_sites(self) -> int:
        return self.params.n_sites

    @property
    def n_categories(self) -> int:
        return self.params.n_categories

    @property
    def space_size(self) -> int:
        """Size of the state space C^N (Python int, may be huge)."""
        return self.n_categories ** self.n_sites

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(N={self.n_sites}, C={self.n_categories})"
        )

    # Validation helpers

    def check_state(self, x: StateLike) -> np.ndarray:
        """
        Validate a state against this model's (N, C).

        Args:
            x: State or integer vector

        Returns:
            int64 vector view of the state

        Raises:
            ShapeError: On dimension or category mismatch
        """
        if isinstance(x, State):
            if x.n_categories != self.n_categories:
                raise ShapeError(
                    f"State has C={x.n_categories}, model expects C={self.n_categories}"
                )
            arr = x.values
        else:
            arr = np.asarray(x)
            if arr.dtype.kind not in "iu":
                raise ShapeError(f"State entries must be integers, got dtype {arr.dtype}")
        if arr.ndim != 1 or arr.shape[0] != self.n_sites:
            raise ShapeError(
                f"State must have length {self.n_sites}, got shape {arr.shape}"
            )
        if arr.min() < 0 or arr.max() >= self.n_categories:
            raise ShapeError(f"State entries must lie in [0, {self.n_categories})")
        return arr.astype(np.int64, copy=False)

    def _check_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != self.n_sites:
            raise ShapeError(
                f"State batch must have shape (B, {self.n_sites}), got {X.shape}"
            )
        if X.size and (X.min() < 0 or X.max() >= self.n_categories):
            raise ShapeError(f"State entries must lie in [0, {self.n_categories})")
        return X.astype(np.int64, copy=False)

    def one_hot(self, x: np.ndarray) -> np.ndarray:
        """One-hot embedding of a state, shape (N, C)."""
        out = np.zeros((self.n_sites, self.n_categories))
        out[np.arange(self.n_sites), x] = 1.0
        return out

    # Public operations

    def energy(self, x: StateLike, counter: Optional[EvalCounter] = None) -> float:
        """
        Energy f(x) of a single state.

        Args:
            x: State to evaluate
            counter: Per-chain evaluation tally (incremented by 1)

        Returns:
            f(x)

        Raises:
            ShapeError: If x does not match the model
        """
        arr = self.check_state(x)
        if counter is not None:
            counter.add(1)
        return float(self._energies(arr[None, :])[0])

    def energies(
        self, X: np.ndarray, counter: Optional[EvalCounter] = None
    ) -> np.ndarray:
        """Batched energies of a (B, N) stack of states; counts B evaluations."""
        X = self._check_batch(X)
        if counter is not None:
            counter.add(X.shape[0])
        return self._energies(X)

    def all_log_ratios(
        self, x: StateLike, counter: Optional[EvalCounter] = None
    ) -> np.ndarray:
        """
        Exact conditional log-ratios for every site at once.

        Entry (n, j) is log pi(x with site n := j) - log pi(x); the entry at
        j = x_n is exactly zero. One sweep counts as one evaluation.
        """
        arr = self.check_state(x)
        if counter is not None:
            counter.add(1)
        table = self._log_ratio_table(arr)
        table[np.arange(self.n_sites), arr] = 0.0
        return table

    def local_log_ratios(
        self, x: StateLike, site: int, counter: Optional[EvalCounter] = None
    ) -> LocalRatios:
        """
        Exact log-ratios from changing only one site.

        Raises:
            SiteIndexError: If site is outside [0, N)
        """
        if not 0 <= site < self.n_sites:
            raise SiteIndexError(f"Site {site} out of range [0, {self.n_sites})")
        arr = self.check_state(x)
        table = self.all_log_ratios(arr, counter)
        return LocalRatios(
            site=site, current=int(arr[site]), log_ratios=table[site].copy()
        )

    def grad_log_ratios(
        self, x: StateLike, counter: Optional[EvalCounter] = None
    ) -> np.ndarray:
        """
        First-order estimate of the conditional log-ratios.

        Entry (n, j) is <grad f(x), e_{x_n} - e_j> at the one-hot embedding of
        x, i.e. -<grad f(x), y - x> for the single-site move. Counts as one
        evaluation (one backpropagation).
        """
        arr = self.check_state(x)
        if counter is not None:
            counter.add(1)
        neg_grad = -self._energy_gradient(self.one_hot(arr))
        current = neg_grad[np.arange(self.n_sites), arr]
        return neg_grad - current[:, None]

    def enumerate_distribution(
        self, cap: int = DEFAULT_ENUMERATION_CAP
    ) -> "DenseDistribution":
        """
        Exact target over every state, by brute-force enumeration.

        Raises:
            CapacityError: If C^N exceeds the cap
        """
        from .distribution import DenseDistribution, enumerate_states

        if self.space_size > cap:
            raise CapacityError(
                f"State space of size {self.n_categories}^{self.n_sites} "
                f"exceeds enumeration cap {cap}"
            )
        states = enumerate_states(self.n_sites, self.n_categories)
        log_w = -self._energies(states)
        log_w -= log_w.max()
        probs = np.exp(log_w)
        probs /= probs.sum()
        self.logger.debug(f"Enumerated {states.shape[0]} states")
        return DenseDistribution(
            probs=probs, n_sites=self.n_sites, n_categories=self.n_categories
        )

    # Hooks for subclasses

    @abstractmethod
    def _energies(self, X: np.ndarray) -> np.ndarray:
        """Energies of a validated (B, N) int batch."""
        pass

    @abstractmethod
    def _log_ratio_table(self, x: np.ndarray) -> np.ndarray:
        """Exact N x C log-ratio table at a validated state."""
        pass

    @abstractmethod
    def _energy_gradient(self, onehot: np.ndarray) -> np.ndarray:
        """Gradient of the relaxed energy with respect to the N x C embedding."""
        pass
