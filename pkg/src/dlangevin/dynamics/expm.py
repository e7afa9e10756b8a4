"""
Matrix exponential oracle for small rate matrices.
"""

import numpy as np
from scipy import linalg

from .base import DomainError

# Entries this far below zero are rounding noise and get clamped
NEGATIVE_TOLERANCE = 1e-12
RATE_ROW_TOLERANCE = 1e-10


def check_rate_matrix(Q: np.ndarray) -> np.ndarray:
    """
    Validate a generator: square, off-diagonals >= 0, rows summing to 0.

    Raises:
        DomainError: If Q is not a rate matrix
    """
    Q = np.asarray(Q, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise DomainError(f"Rate matrix must be square, got shape {Q.shape}")
    if not np.all(np.isfinite(Q)):
        raise DomainError("Rate matrix has non-finite entries")
    off = Q - np.diag(np.diag(Q))
    if np.any(off < 0):
        raise DomainError("Rate matrix has negative off-diagonal entries")
    scale = np.maximum(1.0, off.sum(axis=1))
    if np.any(np.abs(Q.sum(axis=1)) > RATE_ROW_TOLERANCE * scale):
        raise DomainError("Rate matrix rows must sum to 0")
    return Q


def matrix_exponential(Q: np.ndarray, h: float) -> np.ndarray:
    """
    Transition matrix exp(Q h) of a rate matrix.

    Uses scipy's scaling-and-squaring Pade approximant. Entries in
    [-1e-12, 0) are clamped to 0.

    Args:
        Q: C x C rate matrix
        h: Simulation time (>= 0)

    Returns:
        C x C row-stochastic matrix

    Raises:
        DomainError: If Q is not a rate matrix, h < 0, or the result has
            entries below -1e-12
    """
    Q = check_rate_matrix(Q)
    if not h >= 0:
        raise DomainError(f"Simulation time must be non-negative, got {h}")
    if h == 0:
        return np.eye(Q.shape[0])
    P = linalg.expm(Q * h)
    if np.any(P < -NEGATIVE_TOLERANCE):
        raise DomainError(f"matrix exponential produced entry {P.min()!r}")
    return np.maximum(P, 0.0)
