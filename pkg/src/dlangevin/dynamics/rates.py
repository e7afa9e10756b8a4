"""
Rate rows of the discrete Langevin dynamics.

Q_n(x)(i, j) = w_ij * g(pi(x with n := j) / pi(x)) for j != i with w = 1
inside each site and on the 1-Hamming ball; the diagonal is minus the row
sum.
"""

from typing import Optional, Tuple, Union
import logging

import numpy as np

from ..model.base import CapacityError, EnergyModel, EvalCounter, SiteIndexError
from ..model.distribution import enumerate_states
from ..model.types import DEFAULT_ENUMERATION_CAP, RatioSource, StateLike, WeightKind
from .base import FullRateMatrix, RateRow
from .weights import log_g

logger = logging.getLogger(__name__)


def site_log_ratios(
    model: EnergyModel,
    x: StateLike,
    ratio_source: Union[RatioSource, str] = RatioSource.EXACT,
    counter: Optional[EvalCounter] = None,
) -> np.ndarray:
    """N x C log-ratio table from the exact sweep or the gradient estimate."""
    if RatioSource(ratio_source) is RatioSource.EXACT:
        return model.all_log_ratios(x, counter)
    return model.grad_log_ratios(x, counter)


def log_rate_table(
    log_ratios: np.ndarray, current: np.ndarray, weight: Union[WeightKind, str]
) -> np.ndarray:
    """Log off-diagonal rates, N x C; current entries are -inf."""
    log_rates = np.asarray(log_g(weight, log_ratios), dtype=np.float64).copy()
    log_rates[np.arange(current.shape[0]), current] = -np.inf
    return log_rates


def rates_from_ratios(
    log_ratios: np.ndarray, current: np.ndarray, weight: Union[WeightKind, str]
) -> np.ndarray:
    """Rate table with the diagonal set to minus the off-diagonal row sum."""
    rates = np.exp(log_rate_table(log_ratios, current, weight))
    rows = np.arange(current.shape[0])
    rates[rows, current] = -rates.sum(axis=1)
    return rates


def rate_table(
    model: EnergyModel,
    x: StateLike,
    weight: Union[WeightKind, str],
    ratio_source: Union[RatioSource, str] = RatioSource.EXACT,
    counter: Optional[EvalCounter] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rate rows of every site at once.

    Returns:
        (rates, log_ratios), both N x C
    """
    arr = model.check_state(x)
    log_ratios = site_log_ratios(model, arr, ratio_source, counter)
    return rates_from_ratios(log_ratios, arr, weight), log_ratios


def rate_row(
    model: EnergyModel,
    x: StateLike,
    site: int,
    weight: Union[WeightKind, str],
    ratio_source: Union[RatioSource, str] = RatioSource.EXACT,
    counter: Optional[EvalCounter] = None,
) -> RateRow:
    """
    Rate row of a single site.

    Raises:
        SiteIndexError: If site is outside [0, N)
    """
    if not 0 <= site < model.n_sites:
        raise SiteIndexError(f"Site {site} out of range [0, {model.n_sites})")
    arr = model.check_state(x)
    rates, _ = rate_table(model, arr, weight, ratio_source, counter)
    return RateRow(site=site, current=int(arr[site]), rates=rates[site])


def full_rate_matrix(
    model: EnergyModel,
    weight: Union[WeightKind, str],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> FullRateMatrix:
    """
    Dense generator over all C^N states, assembled from rate rows.

    Q[x, y] > 0 exactly when x and y differ in one site.

    Raises:
        CapacityError: If C^N exceeds the cap
    """
    if model.space_size > cap:
        raise CapacityError(
            f"State space of size {model.n_categories}^{model.n_sites} "
            f"exceeds enumeration cap {cap}"
        )
    n, c = model.n_sites, model.n_categories
    states = enumerate_states(n, c)
    size = states.shape[0]
    # stride of site n in the row-major index
    strides = c ** np.arange(n - 1, -1, -1)
    cats = np.arange(c)
    Q = np.zeros((size, size))
    for s in range(size):
        x = states[s]
        rates, _ = rate_table(model, x, weight)
        targets = s + (cats[None, :] - x[:, None]) * strides[:, None]
        off = np.ones((n, c), dtype=bool)
        off[np.arange(n), x] = False
        np.add.at(Q[s], targets[off], rates[off])
        Q[s, s] = -Q[s].sum()
    logger.debug(f"Assembled {size} x {size} rate matrix")
    return FullRateMatrix(states=states, Q=Q, pi=model.enumerate_distribution(cap))
