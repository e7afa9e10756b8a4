"""
Per-site transition rows for simulation time h.

Three discretisations of the per-site dynamics, each vectorised over all N
sites (rows indexed by site, columns by target category):

- interpolated_rows: the DLMC interpolation between P^0 = I and P^inf = nu,
  exact for C = 2.
- euler_rows: forward Euler I + hQ with the true diagonal (DLMCf); negative
  diagonals are clamped to 0 and the row renormalised.
- dmala_rows: the DMALA softmax, i.e. Euler with g = sqrt, h = exp(-1/(2a))
  and the diagonal mass fixed to 1 before normalisation.

The single-row functions are one-site views returning TransitionRow.
"""

from typing import Tuple
import logging

import numpy as np
from scipy.special import softmax

from ..model.base import LocalRatios
from .base import DomainError, RateRow, TransitionRow

logger = logging.getLogger(__name__)

# nu entries below this get no transition mass
NU_FLOOR = 1e-300


def stationary_rows(log_ratios: np.ndarray) -> np.ndarray:
    """Per-site stationary law nu of Q_n: softmax of the log ratios."""
    return softmax(np.asarray(log_ratios, dtype=np.float64), axis=-1)


def _off_mask(shape: Tuple[int, int], current: np.ndarray) -> np.ndarray:
    mask = np.ones(shape, dtype=bool)
    mask[np.arange(shape[0]), current] = False
    return mask


def interpolated_rows(
    rates: np.ndarray, log_ratios: np.ndarray, current: np.ndarray, h: float
) -> np.ndarray:
    """
    Interpolated transition rows of every site.

    Off-diagonal j: nu_j * (1 - exp(-h * Q_ij / nu_j)); diagonal: the
    remaining mass, so h = 0 gives the exact one-hot row.

    Args:
        rates: N x C rate table
        log_ratios: N x C log ratios the rates were built from
        current: Current category per site
        h: Simulation time (>= 0)

    Returns:
        N x C row-stochastic matrix
    """
    if h < 0:
        raise DomainError(f"Simulation time must be non-negative, got {h}")
    nu = stationary_rows(log_ratios)
    off = _off_mask(rates.shape, current)
    live = off & (nu >= NU_FLOOR)
    rows = np.zeros_like(nu)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        decay = -np.expm1(-h * rates[live] / nu[live])
    rows[live] = nu[live] * decay
    sites = np.arange(rates.shape[0])
    rows[sites, current] = np.maximum(1.0 - rows.sum(axis=1), 0.0)
    return rows


def euler_rows(
    rates: np.ndarray, current: np.ndarray, h: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Forward-Euler transition rows of every site.

    Returns:
        (rows, clamped) where clamped flags rows whose diagonal was negative
    """
    if h < 0:
        raise DomainError(f"Simulation time must be non-negative, got {h}")
    off = _off_mask(rates.shape, current)
    rows = np.where(off, h * rates, 0.0)
    sites = np.arange(rates.shape[0])
    diag = 1.0 - rows.sum(axis=1)
    clamped = diag < 0
    rows[sites, current] = np.where(clamped, 0.0, diag)
    if np.any(clamped):
        rows[clamped] /= rows[clamped].sum(axis=1, keepdims=True)
    return rows, clamped


def dmala_rows(log_ratios: np.ndarray, current: np.ndarray, alpha: float) -> np.ndarray:
    """
    DMALA transition rows of every site.

    Unnormalised mass 1 on the current category and
    exp(0.5 * log_ratio_j - 1 / (2 * alpha)) elsewhere.

    Raises:
        DomainError: If alpha <= 0
    """
    if not alpha > 0:
        raise DomainError(f"DMALA step alpha must be positive, got {alpha}")
    logits = 0.5 * np.asarray(log_ratios, dtype=np.float64) - 1.0 / (2.0 * alpha)
    logits[np.arange(logits.shape[0]), current] = 0.0
    return softmax(logits, axis=-1)


def interpolated_row(
    rate: RateRow, log_ratios: LocalRatios, current: int, h: float
) -> TransitionRow:
    """Interpolated row of one site."""
    rows = interpolated_rows(
        rate.rates[None, :], log_ratios.log_ratios[None, :], np.array([current]), h
    )
    return TransitionRow(probs=rows[0], current=current)


def euler_row(rate: RateRow, current: int, h: float) -> TransitionRow:
    """Forward-Euler row of one site; clamped is set when the diagonal was cut."""
    rows, clamped = euler_rows(rate.rates[None, :], np.array([current]), h)
    if clamped[0]:
        logger.debug(f"Euler row at site {rate.site} clamped for h={h}")
    return TransitionRow(probs=rows[0], current=current, clamped=bool(clamped[0]))


def dmala_row(log_ratios: LocalRatios, current: int, alpha: float) -> TransitionRow:
    """DMALA row of one site."""
    rows = dmala_rows(log_ratios.log_ratios[None, :], np.array([current]), alpha)
    return TransitionRow(probs=rows[0], current=current)
