"""
Factorized samplers: DLMC, DLMCf and DMALA.

All three propose every site independently from a per-site transition row
built at x, and score the reverse move with rows rebuilt at y. A step costs
two ratio sweeps (at x and at y) and two energies.
"""

from abc import abstractmethod
from typing import Tuple

import numpy as np

from ..dynamics.rates import rates_from_ratios, site_log_ratios
from ..dynamics.transitions import dmala_rows, euler_rows, interpolated_rows
from ..model.base import EnergyModel
from ..model.types import SamplerKind
from .base import BaseSampler, ChainState, Proposal, sample_rows


def _row_log_prob(rows: np.ndarray, picks: np.ndarray) -> float:
    p = rows[np.arange(rows.shape[0]), picks]
    with np.errstate(divide="ignore"):
        return float(np.log(p).sum())


class FactorizedSampler(BaseSampler):
    """Template for per-site independent proposals."""

    @abstractmethod
    def rows(self, log_ratios: np.ndarray, current: np.ndarray) -> Tuple[np.ndarray, int]:
        """Transition rows at a state and the number of clamped rows."""
        pass

    def evals_per_step(self, model: EnergyModel) -> int:
        return 4

    def propose(self, chain: ChainState, model: EnergyModel) -> Proposal:
        source = self.config.ratio_source
        x = chain.x
        forward, clamps = self.rows(site_log_ratios(model, x, source, chain.counter), x)
        y = sample_rows(forward, chain.rng)
        reverse, _ = self.rows(site_log_ratios(model, y, source, chain.counter), y)
        log_pi_x = -model.energy(x, chain.counter)
        log_pi_y = -model.energy(y, chain.counter)
        return Proposal(
            y=y,
            log_pi_y=log_pi_y,
            log_q_xy=_row_log_prob(forward, y),
            log_q_yx=_row_log_prob(reverse, x),
            log_pi_x=log_pi_x,
            clamp_events=clamps,
        )


class DlmcSampler(FactorizedSampler):
    """Interpolated per-site rows for simulation time h."""

    kind = SamplerKind.DLMC

    def rows(self, log_ratios: np.ndarray, current: np.ndarray) -> Tuple[np.ndarray, int]:
        rates = rates_from_ratios(log_ratios, current, self.config.weight)
        return interpolated_rows(rates, log_ratios, current, float(self.config.step)), 0


class DlmcfSampler(FactorizedSampler):
    """Forward-Euler per-site rows; clamped rows are counted."""

    kind = SamplerKind.DLMCF

    def rows(self, log_ratios: np.ndarray, current: np.ndarray) -> Tuple[np.ndarray, int]:
        rates = rates_from_ratios(log_ratios, current, self.config.weight)
        rows, clamped = euler_rows(rates, current, float(self.config.step))
        return rows, int(clamped.sum())


class DmalaSampler(FactorizedSampler):
    """Softmax rows exp(0.5 * log ratio - 1 / (2 alpha)) with unit self mass."""

    kind = SamplerKind.DMALA

    def rows(self, log_ratios: np.ndarray, current: np.ndarray) -> Tuple[np.ndarray, int]:
        return dmala_rows(log_ratios, current, float(self.config.step)), 0
