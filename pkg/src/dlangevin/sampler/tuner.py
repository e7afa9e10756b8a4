"""
Acceptance-rate tuner.

Stochastic approximation on the log of the tunable hyperparameter:
log theta += k^-0.6 * (accepted_k - target). Integer U is tuned through a
continuous surrogate that is rounded and clipped to [1, N] at every step.
"""

from typing import List, Optional, Tuple
import logging
import math

import numpy as np
from pydantic import Field

from ..model.base import BaseElement, EnergyModel
from ..model.types import StateLike, TuningStatus
from .base import ChainState, SamplerConfig, TuningError
from .registry import build_sampler

TRAILING_WINDOW = 1000
TOLERANCE = 0.05
DECAY = 0.6
STEP_BOUNDS = (1e-6, 1e6)

logger = logging.getLogger(__name__)


class TuningReport(BaseElement):
    """Outcome of one tuning run."""

    status: TuningStatus = Field(..., description="converged, saturated, failed or skipped")
    config: SamplerConfig = Field(..., description="Config carrying the tuned value")
    value: Optional[float] = Field(None, description="Tuned hyperparameter value")
    target_rate: float = Field(..., gt=0, lt=1)
    trailing_acceptance: Optional[float] = Field(None, ge=0, le=1)
    adaptation_steps: int = Field(0, ge=0)
    history: List[float] = Field(default_factory=list, description="Value after each step")

    @property
    def succeeded(self) -> bool:
        return self.status is not TuningStatus.FAILED


def skipped(config: SamplerConfig, target_rate: float) -> TuningReport:
    """Report for kernels without a tunable hyperparameter."""
    return TuningReport(
        status=TuningStatus.SKIPPED,
        config=config,
        value=config.tuned_value,
        target_rate=target_rate,
    )


def _bounds(config: SamplerConfig, model: EnergyModel) -> Tuple[float, float]:
    if config.tunable == "flips":
        return 1.0, float(model.n_sites)
    return STEP_BOUNDS


def tune(
    config: SamplerConfig,
    model: EnergyModel,
    target_rate: float,
    adaptation_steps: int,
    rng: np.random.Generator,
    x0: Optional[StateLike] = None,
) -> TuningReport:
    """
    Adapt the tunable hyperparameter towards an acceptance target.

    Args:
        config: Sampler config; its current value is the starting point
        model: Target model
        target_rate: Acceptance target in (0, 1)
        adaptation_steps: Number of adapted MH steps
        rng: Generator driving the tuning chain
        x0: Start state; uniform random when omitted

    Returns:
        TuningReport. A run that ends away from the target is reported as
        saturated when the value sits at a bound, failed otherwise; the
        best value found is returned either way.

    Raises:
        TuningError: If the kind has nothing to tune or the inputs are invalid
    """
    if config.tunable is None:
        raise TuningError(f"{config.kind.value} has no tunable hyperparameter")
    if not 0 < target_rate < 1:
        raise TuningError(f"target_rate must be in (0, 1), got {target_rate}")
    if adaptation_steps < 1:
        raise TuningError(f"adaptation_steps must be >= 1, got {adaptation_steps}")

    lo, hi = _bounds(config, model)
    log_lo, log_hi = math.log(lo), math.log(hi)
    log_theta = min(max(math.log(float(config.tuned_value)), log_lo), log_hi)

    sampler = build_sampler(config.with_value(math.exp(log_theta)))
    sampler.check_model(model)
    if x0 is None:
        x0 = rng.integers(0, model.n_categories, size=model.n_sites)
    chain = ChainState.start(model, x0, rng)

    logger.info(
        f"Tuning {config.label} {config.tunable} towards acceptance {target_rate} "
        f"over {adaptation_steps} steps"
    )
    history: List[float] = []
    outcomes = np.zeros(adaptation_steps, dtype=bool)
    for k in range(1, adaptation_steps + 1):
        sampler.config = config.with_value(_realise(config, log_theta, lo, hi))
        before = chain.accepted
        sampler.step(chain, model)
        outcomes[k - 1] = chain.accepted > before
        log_theta += k ** -DECAY * (float(outcomes[k - 1]) - target_rate)
        log_theta = min(max(log_theta, log_lo), log_hi)
        history.append(_realise(config, log_theta, lo, hi))

    value = history[-1]
    trailing = float(outcomes[-TRAILING_WINDOW:].mean())
    status = _classify(trailing, target_rate, value, lo, hi)
    if status is TuningStatus.CONVERGED:
        logger.info(f"{config.label} tuned: {config.tunable}={value:g}, acceptance {trailing:.3f}")
    else:
        logger.warning(
            f"{config.label} tuning {status.value}: {config.tunable}={value:g}, "
            f"acceptance {trailing:.3f} vs target {target_rate}"
        )
    return TuningReport(
        status=status,
        config=config.with_value(value),
        value=value,
        target_rate=target_rate,
        trailing_acceptance=trailing,
        adaptation_steps=adaptation_steps,
        history=history,
    )


def _realise(config: SamplerConfig, log_theta: float, lo: float, hi: float) -> float:
    value = math.exp(log_theta)
    if config.tunable == "flips":
        return float(min(max(round(value), int(lo)), int(hi)))
    return value


def _classify(trailing: float, target: float, value: float, lo: float, hi: float) -> TuningStatus:
    if abs(trailing - target) <= TOLERANCE:
        return TuningStatus.CONVERGED
    # acceptance above target wants a larger value and vice versa
    pinned_high = trailing > target and value >= hi * (1 - 1e-12)
    pinned_low = trailing < target and value <= lo * (1 + 1e-12)
    if pinned_high or pinned_low:
        return TuningStatus.SATURATED
    return TuningStatus.FAILED
