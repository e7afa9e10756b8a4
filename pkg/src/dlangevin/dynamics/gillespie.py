"""
Exact simulation of the discrete Langevin jump process.

From state x the process waits an Exp(lambda) holding time with
lambda = -q_xx = sum of all off-diagonal rates over every site, then jumps
to a 1-Hamming neighbour chosen with probability q_xy / lambda.
"""

from typing import List, Optional, Tuple, Union
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import logsumexp, softmax

from ..model.base import EnergyModel, EvalCounter
from ..model.types import RatioSource, StateLike, WeightKind
from .base import DomainError
from .rates import log_rate_table, site_log_ratios

logger = logging.getLogger(__name__)


class JumpEvent(BaseModel):
    """Holding time and destination of one jump."""

    holding_time: float = Field(..., ge=0)
    site: int = Field(..., ge=-1, description="Jumping site; -1 when absorbing")
    value: int = Field(..., ge=-1, description="New category; -1 when absorbing")

    @property
    def absorbing(self) -> bool:
        return self.site < 0


class GillespiePath(BaseModel):
    """Jump times and the states entered at them, starting with (0, x0)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    times: List[float] = Field(default_factory=list)
    states: List[np.ndarray] = Field(default_factory=list)
    t_end: float = Field(..., gt=0)
    absorbed: bool = Field(False, description="Path stopped in a state with no exits")

    @property
    def n_jumps(self) -> int:
        return len(self.times) - 1 - int(self.absorbed)

    def state_at(self, t: float) -> np.ndarray:
        """State occupied at time t (right-continuous)."""
        idx = int(np.searchsorted(self.times, t, side="right")) - 1
        return self.states[max(idx, 0)]


def draw_jump(log_rates: np.ndarray, rng: np.random.Generator) -> Tuple[int, int]:
    """Sample (site, value) with probability proportional to exp(log_rates)."""
    probs = softmax(log_rates.ravel())
    flat = int(rng.choice(probs.size, p=probs))
    site, value = divmod(flat, log_rates.shape[1])
    return site, value


def first_jump_law(
    model: EnergyModel,
    x: StateLike,
    weight: Union[WeightKind, str],
    ratio_source: Union[RatioSource, str] = RatioSource.EXACT,
    counter: Optional[EvalCounter] = None,
) -> np.ndarray:
    """
    Categorical law of the first jump out of x, as an N x C table.

    Entry (n, j) is q(x, x with n := j) / -q_xx; current entries are 0.
    """
    arr = model.check_state(x)
    log_rates = log_rate_table(site_log_ratios(model, arr, ratio_source, counter), arr, weight)
    if not np.isfinite(logsumexp(log_rates)):
        raise DomainError(f"State {arr.tolist()} is absorbing; no first jump")
    return softmax(log_rates.ravel()).reshape(log_rates.shape)


def first_jump(
    model: EnergyModel,
    x: StateLike,
    weight: Union[WeightKind, str],
    rng: np.random.Generator,
    ratio_source: Union[RatioSource, str] = RatioSource.EXACT,
    counter: Optional[EvalCounter] = None,
) -> JumpEvent:
    """Holding time and destination of the next jump from x."""
    arr = model.check_state(x)
    log_rates = log_rate_table(site_log_ratios(model, arr, ratio_source, counter), arr, weight)
    log_exit = float(logsumexp(log_rates))
    if not np.isfinite(log_exit):
        return JumpEvent(holding_time=np.inf, site=-1, value=-1)
    holding = float(rng.exponential(np.exp(-log_exit)))
    site, value = draw_jump(log_rates, rng)
    return JumpEvent(holding_time=holding, site=site, value=value)


def gillespie_path(
    model: EnergyModel,
    x0: StateLike,
    t_end: float,
    weight: Union[WeightKind, str],
    rng: np.random.Generator,
    ratio_source: Union[RatioSource, str] = RatioSource.EXACT,
    max_jumps: Optional[int] = None,
) -> GillespiePath:
    """
    Exact CTMC path on [0, t_end].

    An absorbing state ends the path with a final (t_end, x) entry.

    Args:
        model: Target model
        x0: Initial state
        t_end: Horizon (> 0)
        weight: Weight function kind
        rng: Caller-owned generator
        ratio_source: exact or gradient ratios
        max_jumps: Optional cap on the number of jumps

    Raises:
        DomainError: If t_end <= 0
    """
    if not t_end > 0:
        raise DomainError(f"t_end must be positive, got {t_end}")
    x = model.check_state(x0).copy()
    path = GillespiePath(times=[0.0], states=[x.copy()], t_end=t_end)
    t = 0.0
    while max_jumps is None or path.n_jumps < max_jumps:
        event = first_jump(model, x, weight, rng, ratio_source)
        if event.absorbing:
            path.times.append(t_end)
            path.states.append(x.copy())
            path.absorbed = True
            break
        t += event.holding_time
        if t > t_end:
            break
        x[event.site] = event.value
        path.times.append(t)
        path.states.append(x.copy())
    logger.debug(f"Gillespie path with {path.n_jumps} jumps up to t={t_end}")
    return path
