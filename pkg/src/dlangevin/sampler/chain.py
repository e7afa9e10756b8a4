"""
Chain driver: burn-in, trace collection and per-run accounting.
"""

from typing import Optional
import logging
import time

import numpy as np

from ..model.base import EnergyModel
from .base import BaseSampler, ChainState, RunRecord, SamplerException

logger = logging.getLogger(__name__)


def run_chain(
    sampler: BaseSampler,
    model: EnergyModel,
    chain: ChainState,
    steps: int,
    burn_in: int = 0,
    keep_samples: bool = False,
) -> RunRecord:
    """
    Run a chain for `steps` total steps, discarding the first `burn_in`.

    Counters, trace and wall time in the record cover the post-burn-in
    steps only; the trace holds energy(x_t) after each of them.

    Args:
        sampler: Kernel to apply
        model: Target model
        chain: Chain to advance (mutated in place)
        steps: Total number of steps, burn-in included
        burn_in: Steps discarded before recording
        keep_samples: Keep every post-burn-in state

    Returns:
        RunRecord for the recorded steps

    Raises:
        SamplerException: If burn_in is not smaller than steps
    """
    if steps < 1 or not 0 <= burn_in < steps:
        raise SamplerException(f"Need 0 <= burn_in < steps, got burn_in={burn_in}, steps={steps}")
    sampler.check_model(model)

    for _ in range(burn_in):
        sampler.step(chain, model)

    kept = steps - burn_in
    evals0, acc0, clamp0 = chain.counter.count, chain.accepted, chain.clamp_events
    trace = np.empty(kept)
    samples = np.empty((kept, model.n_sites), dtype=np.int64) if keep_samples else None

    start = time.perf_counter()
    for t in range(kept):
        sampler.step(chain, model)
        trace[t] = chain.energy
        if samples is not None:
            samples[t] = chain.x
    wall_time = time.perf_counter() - start

    record = RunRecord(
        sampler=sampler.config.label,
        chain_id=chain.chain_id,
        seed=chain.seed,
        steps=kept,
        accepted=chain.accepted - acc0,
        energy_evals=chain.counter.count - evals0,
        clamp_events=chain.clamp_events - clamp0,
        trace=trace,
        hyperparameters=sampler.config.model_dump(mode="json", exclude_none=True),
        wall_time=wall_time,
        samples=samples,
    )
    logger.debug(
        f"{record.sampler} chain {record.chain_id}: acceptance {record.acceptance_rate:.3f}, "
        f"{record.energy_evals} evals"
    )
    if record.clamp_events:
        logger.warning(f"{record.sampler} chain {record.chain_id}: {record.clamp_events} clamped rows")
    return record
