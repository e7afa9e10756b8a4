"""
Jump samplers on the 1-Hamming ball: GWG (one jump) and PAS (L jumps).

Both draw jumps from the first-jump law of the discrete Langevin dynamics,
q(x, y) proportional to g(pi(y) / pi(x)) over all N (C - 1) neighbours.
"""

from typing import List, Tuple

import numpy as np
from scipy.special import log_softmax

from ..dynamics.gillespie import draw_jump
from ..dynamics.rates import log_rate_table, site_log_ratios
from ..model.base import EnergyModel
from ..model.types import SamplerKind
from .base import BaseSampler, ChainState, Proposal


class JumpSampler(BaseSampler):
    """Shared jump-law helpers."""

    def jump_log_probs(self, model: EnergyModel, x: np.ndarray, chain: ChainState) -> np.ndarray:
        """N x C log-probabilities of the next jump from x (one sweep)."""
        log_ratios = site_log_ratios(model, x, self.config.ratio_source, chain.counter)
        log_rates = log_rate_table(log_ratios, x, self.config.weight)
        return log_softmax(log_rates.ravel()).reshape(log_rates.shape)

    def n_jumps(self) -> int:
        return 1

    def evals_per_step(self, model: EnergyModel) -> int:
        return self.n_jumps() + 3

    def propose(self, chain: ChainState, model: EnergyModel) -> Proposal:
        y = chain.x.copy()
        laws: List[np.ndarray] = [self.jump_log_probs(model, y, chain)]
        moves: List[Tuple[int, int]] = []
        log_q_xy = 0.0
        for _ in range(self.n_jumps()):
            site, value = draw_jump(laws[-1], chain.rng)
            log_q_xy += float(laws[-1][site, value])
            moves.append((site, int(y[site])))
            y[site] = value
            laws.append(self.jump_log_probs(model, y, chain))
        # reverse path: from each point, undo the move that led to it
        log_q_yx = sum(
            float(laws[point][site, previous])
            for point, (site, previous) in enumerate(moves, start=1)
        )
        return Proposal(
            y=y,
            log_pi_y=-model.energy(y, chain.counter),
            log_q_xy=log_q_xy,
            log_q_yx=log_q_yx,
            log_pi_x=-model.energy(chain.x, chain.counter),
        )


class GwgSampler(JumpSampler):
    """Single jump; MH-corrected with the reverse single-jump probability."""

    kind = SamplerKind.GWG


class PasSampler(JumpSampler):
    """Free path of L jumps; MH-corrected on the reversed path."""

    kind = SamplerKind.PAS

    def n_jumps(self) -> int:
        return int(self.config.flips or 1)
