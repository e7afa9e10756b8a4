"""
Baseline samplers: random-walk Metropolis, block Gibbs and Hamming ball.
"""

import numpy as np
from scipy.special import softmax

from ..model.base import EnergyModel
from ..model.distribution import enumerate_states
from ..model.types import SamplerKind
from .base import BaseSampler, ChainState, Proposal, check_block_capacity


def _block(n_sites: int, size: int, rng: np.random.Generator) -> np.ndarray:
    return rng.choice(n_sites, size=min(size, n_sites), replace=False)


class RwmSampler(BaseSampler):
    """Moves U distinct random sites to random new categories; symmetric."""

    kind = SamplerKind.RWM

    def evals_per_step(self, model: EnergyModel) -> int:
        return 1

    def propose(self, chain: ChainState, model: EnergyModel) -> Proposal:
        c = model.n_categories
        sites = _block(model.n_sites, int(self.config.flips or 1), chain.rng)
        y = chain.x.copy()
        y[sites] = (y[sites] + chain.rng.integers(1, c, size=sites.size)) % c
        return Proposal(y=y, log_pi_y=-model.energy(y, chain.counter))


class BlockGibbsSampler(BaseSampler):
    """Exact conditional resample of a random block of sites."""

    kind = SamplerKind.BLOCK_GIBBS

    def block_size(self, model: EnergyModel) -> int:
        return min(int(self.config.block_size or 1), model.n_sites)

    def check_model(self, model: EnergyModel) -> None:
        check_block_capacity(model.n_categories, self.block_size(model))

    def evals_per_step(self, model: EnergyModel) -> int:
        return int(model.n_categories ** self.block_size(model))

    def propose(self, chain: ChainState, model: EnergyModel) -> Proposal:
        sites = _block(model.n_sites, self.block_size(model), chain.rng)
        fills = enumerate_states(sites.size, model.n_categories)
        candidates = np.repeat(chain.x[None, :], fills.shape[0], axis=0)
        candidates[:, sites] = fills
        log_w = -model.energies(candidates, chain.counter)
        pick = int(chain.rng.choice(fills.shape[0], p=softmax(log_w)))
        return Proposal(y=candidates[pick].copy(), log_pi_y=float(log_w[pick]), always_accept=True)


class HammingBallSampler(BaseSampler):
    """
    Hamming-ball auxiliary-variable sampler with radius 1 inside a block.

    Draws u uniformly from the radius-1 ball around x restricted to a random
    block, then samples x' proportional to pi over the ball around u. The
    ball size is the same around every point, so the move is always kept.
    """

    kind = SamplerKind.HAMMING_BALL

    def block_size(self, model: EnergyModel) -> int:
        return min(int(self.config.block_size or 1), model.n_sites)

    def evals_per_step(self, model: EnergyModel) -> int:
        return 1 + self.block_size(model) * (model.n_categories - 1)

    def _ball(self, centre: np.ndarray, sites: np.ndarray, c: int) -> np.ndarray:
        """Centre plus every single-site change inside the block."""
        shifts = np.arange(1, c)
        ball = np.repeat(centre[None, :], 1 + sites.size * (c - 1), axis=0)
        rows = 1 + np.arange(sites.size * (c - 1))
        cols = np.repeat(sites, c - 1)
        ball[rows, cols] = (centre[cols] + np.tile(shifts, sites.size)) % c
        return ball

    def propose(self, chain: ChainState, model: EnergyModel) -> Proposal:
        c = model.n_categories
        sites = _block(model.n_sites, self.block_size(model), chain.rng)
        around_x = self._ball(chain.x, sites, c)
        u = around_x[int(chain.rng.integers(around_x.shape[0]))]
        around_u = self._ball(u, sites, c)
        log_w = -model.energies(around_u, chain.counter)
        pick = int(chain.rng.choice(around_u.shape[0], p=softmax(log_w)))
        return Proposal(y=around_u[pick].copy(), log_pi_y=float(log_w[pick]), always_accept=True)
