"""
Sampler base classes, chain state and the Metropolis-Hastings test.

Every kernel follows the same template: propose a move from the current
chain state, run the MH test on the proposal's log-probabilities, then
record the outcome in the chain.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, NamedTuple, Optional
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..model.base import BaseElement, CapacityError, EnergyModel, EvalCounter
from ..model.types import DEFAULT_ENUMERATION_CAP, RatioSource, SamplerKind, StateLike, WeightKind

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SamplerException(Exception):
    """Base exception for sampler errors."""
    pass


class SamplerConfigError(SamplerException):
    """Raised when a sampler configuration is invalid."""
    pass


class TuningError(SamplerException):
    """Raised when tuning cannot be attempted."""
    pass


# Kinds and the hyperparameter the tuner adjusts
STEP_KINDS = (SamplerKind.DLMC, SamplerKind.DLMCF, SamplerKind.DMALA)
FLIP_KINDS = (SamplerKind.RWM, SamplerKind.PAS)
BLOCK_KINDS = (SamplerKind.BLOCK_GIBBS, SamplerKind.HAMMING_BALL)
LOCALLY_BALANCED = (
    SamplerKind.GWG, SamplerKind.PAS, SamplerKind.DMALA, SamplerKind.DLMCF, SamplerKind.DLMC
)

DEFAULT_STEP = {SamplerKind.DLMC: 1.0, SamplerKind.DLMCF: 0.1, SamplerKind.DMALA: 1.0}
DEFAULT_FLIPS = {SamplerKind.RWM: 1, SamplerKind.PAS: 3}
DEFAULT_BLOCK = {SamplerKind.BLOCK_GIBBS: 2, SamplerKind.HAMMING_BALL: 10}


def splitmix64(value: int) -> int:
    """One splitmix64 output for the given state."""
    z = (value + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_id(seed: int, sampler_index: int, chain_index: int) -> int:
    """Seed of chain c of sampler s: splitmix64 chained over (seed, s, c)."""
    state = splitmix64(seed & MASK64)
    state = splitmix64(state ^ (sampler_index & MASK64))
    return splitmix64(state ^ (chain_index & MASK64))


def chain_rng(seed: int, sampler_index: int, chain_index: int) -> np.random.Generator:
    return np.random.default_rng(stream_id(seed, sampler_index, chain_index))


class SamplerConfig(BaseElement):
    """
    Kernel kind and hyperparameters.

    step is h for dlmc/dlmcf and alpha for dmala; flips is U for rwm and the
    path length L for pas; block_size applies to the block kernels. Unset
    hyperparameters get per-kind defaults.
    """

    kind: SamplerKind = Field(..., description="Sampler kind")
    weight: WeightKind = Field(WeightKind.SQRT, description="Locally balanced weight")
    step: Optional[float] = Field(None, ge=0, description="h (dlmc, dlmcf) or alpha (dmala)")
    flips: Optional[int] = Field(None, ge=1, description="U (rwm) or path length L (pas)")
    block_size: Optional[int] = Field(None, ge=1, description="Block size (block kernels)")
    ratio_source: RatioSource = Field(RatioSource.EXACT, description="exact or gradient ratios")
    target_rate: Optional[float] = Field(
        None, gt=0, lt=1, description="Per-sampler acceptance target for tuning"
    )

    @model_validator(mode="after")
    def fill_defaults(self) -> "SamplerConfig":
        if self.kind in STEP_KINDS and self.step is None:
            self.step = DEFAULT_STEP[self.kind]
        if self.kind is SamplerKind.DMALA and not (self.step or 0) > 0:
            raise ValueError("dmala step alpha must be > 0")
        if self.kind in FLIP_KINDS and self.flips is None:
            self.flips = DEFAULT_FLIPS[self.kind]
        if self.kind in BLOCK_KINDS and self.block_size is None:
            self.block_size = DEFAULT_BLOCK[self.kind]
        return self

    @property
    def tunable(self) -> Optional[str]:
        """Name of the tuned hyperparameter, or None."""
        if self.kind in STEP_KINDS:
            return "step"
        if self.kind in FLIP_KINDS:
            return "flips"
        return None

    @property
    def tuned_value(self) -> Optional[float]:
        name = self.tunable
        return None if name is None else float(getattr(self, name))

    @property
    def label(self) -> str:
        """Short name, e.g. 'dlmc-sqrt' for locally balanced kinds."""
        if self.kind in LOCALLY_BALANCED and self.kind is not SamplerKind.DMALA:
            return f"{self.kind.value}-{self.weight.value}"
        return self.kind.value

    def with_value(self, value: float) -> "SamplerConfig":
        """Copy with the tunable hyperparameter replaced."""
        name = self.tunable
        if name is None:
            raise SamplerConfigError(f"{self.kind.value} has no tunable hyperparameter")
        cast = int(value) if name == "flips" else float(value)
        return self.model_copy(update={name: cast})


class Proposal(NamedTuple):
    """A proposed move with the log terms of the MH ratio."""

    y: np.ndarray
    log_pi_y: float
    log_q_xy: float = 0.0
    log_q_yx: float = 0.0
    log_pi_x: Optional[float] = None
    always_accept: bool = False
    clamp_events: int = 0


class RunRecord(BaseModel):
    """Per-chain statistics of a finished run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    sampler: str = Field(..., description="Sampler label")
    chain_id: int = Field(0, ge=0)
    seed: int = Field(0, ge=0)
    steps: int = Field(0, ge=0)
    accepted: int = Field(0, ge=0)
    energy_evals: int = Field(0, ge=0)
    clamp_events: int = Field(0, ge=0)
    trace: np.ndarray = Field(default_factory=lambda: np.zeros(0), description="Energy per step")
    hyperparameters: Dict[str, Any] = Field(default_factory=dict)
    history: List[float] = Field(default_factory=list, description="Tuned value history")
    wall_time: Optional[float] = Field(None, ge=0, description="Seconds in the sampling loop")
    samples: Optional[np.ndarray] = Field(None, description="Post-burn-in states")

    @field_validator("trace", mode="before")
    @classmethod
    def coerce_trace(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype=np.float64)

    @model_validator(mode="after")
    def validate_counts(self) -> "RunRecord":
        if self.accepted > self.steps:
            raise ValueError(f"accepted ({self.accepted}) exceeds steps ({self.steps})")
        return self

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.steps if self.steps else 0.0


class ChainState(BaseModel):
    """
    Mutable state of one chain.

    log_pi_x is -f(x), refreshed whenever a move is accepted; counter is the
    chain's own energy-evaluation tally.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: np.ndarray
    log_pi_x: float
    rng: np.random.Generator
    counter: EvalCounter = Field(default_factory=EvalCounter)
    steps: int = 0
    accepted: int = 0
    clamp_events: int = 0
    seed: int = 0
    chain_id: int = 0

    @classmethod
    def start(
        cls,
        model: EnergyModel,
        x0: StateLike,
        rng: np.random.Generator,
        seed: int = 0,
        chain_id: int = 0,
    ) -> "ChainState":
        """Chain at x0; the initial energy is not counted."""
        x = np.array(model.check_state(x0), dtype=np.int64)
        return cls(x=x, log_pi_x=-model.energy(x), rng=rng, seed=seed, chain_id=chain_id)

    @property
    def energy(self) -> float:
        return -self.log_pi_x


def mh_accept(
    log_pi_x: float,
    log_pi_y: float,
    log_q_xy: float,
    log_q_yx: float,
    rng: np.random.Generator,
) -> bool:
    """
    Metropolis-Hastings test.

    Accepts with probability min(1, exp(log_pi_y + log_q_yx - log_pi_x - log_q_xy)).
    A -inf on the y side always rejects. One uniform is drawn per call.

    Raises:
        SamplerException: On NaN input
    """
    terms = (log_pi_x, log_pi_y, log_q_xy, log_q_yx)
    if any(math.isnan(t) for t in terms):
        raise SamplerException(f"NaN in MH inputs {terms}")
    u = rng.random()
    forward = log_pi_y + log_q_yx
    backward = log_pi_x + log_q_xy
    if forward == -math.inf or backward == -math.inf:
        return False
    log_ratio = forward - backward
    if log_ratio >= 0:
        return True
    return u < math.exp(log_ratio)


class BaseSampler(ABC):
    """
    Abstract base class for all MCMC kernels.

    Implements the step template:
    1. propose(): draw y and the log terms of the MH ratio
    2. mh_accept(): accept or reject (skipped for always-accept kernels)
    3. record the outcome in the chain state

    Subclasses implement propose() and evals_per_step().
    """

    kind: SamplerKind

    def __init__(self, config: SamplerConfig, logger: Optional[logging.Logger] = None):
        """
        Initialize sampler.

        Args:
            config: Validated sampler configuration
            logger: Optional logger instance. If None, creates default logger.

        Raises:
            SamplerConfigError: If the config is for another kind
        """
        if config.kind is not self.kind:
            raise SamplerConfigError(
                f"{self.__class__.__name__} cannot run a {config.kind.value} config"
            )
        self.config = config
        self.logger = logger or logging.getLogger(self.__class__.__name__)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.config.label})"

    @abstractmethod
    def propose(self, chain: ChainState, model: EnergyModel) -> Proposal:
        """Draw a proposal from the chain's current state."""
        pass

    @abstractmethod
    def evals_per_step(self, model: EnergyModel) -> int:
        """Energy evaluations one step costs on this model."""
        pass

    def check_model(self, model: EnergyModel) -> None:
        """Hook for kernels with model-dependent limits."""
        pass

    def step(self, chain: ChainState, model: EnergyModel) -> ChainState:
        """
        Advance the chain by one MH step.

        Args:
            chain: Chain to advance (mutated in place)
            model: Target model

        Returns:
            The same chain object
        """
        proposal = self.propose(chain, model)
        log_pi_x = chain.log_pi_x if proposal.log_pi_x is None else proposal.log_pi_x
        if proposal.always_accept:
            accepted = True
        else:
            accepted = mh_accept(
                log_pi_x, proposal.log_pi_y, proposal.log_q_xy, proposal.log_q_yx, chain.rng
            )
        chain.steps += 1
        chain.clamp_events += proposal.clamp_events
        if accepted:
            chain.x = proposal.y
            chain.log_pi_x = proposal.log_pi_y
            chain.accepted += 1
        else:
            chain.log_pi_x = log_pi_x
        return chain


def sample_rows(rows: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw one category per row of an N x C stochastic matrix (inverse CDF)."""
    u = rng.random(rows.shape[0])
    cdf = np.cumsum(rows, axis=1)
    picks = (cdf <= u[:, None] * cdf[:, -1:]).sum(axis=1)
    return np.minimum(picks, rows.shape[1] - 1).astype(np.int64)


def check_block_capacity(
    n_categories: int, block: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> None:
    """
    Raises:
        CapacityError: If C^block exceeds the enumeration cap
    """
    if n_categories ** block > cap:
        raise CapacityError(
            f"Block of {block} sites with C={n_categories} exceeds enumeration cap {cap}"
        )
