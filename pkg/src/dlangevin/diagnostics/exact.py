"""
Comparison of empirical samples against the enumerated target.
"""

from typing import Optional

import numpy as np

from ..model.base import EnergyModel, ShapeError
from ..model.distribution import DenseDistribution, state_index
from ..model.types import DEFAULT_ENUMERATION_CAP
from .base import DistributionReport, EmptyRunError


def empirical_distribution(samples: np.ndarray, n_categories: int) -> np.ndarray:
    """Histogram of a (T, N) sample stack over the row-major state order."""
    X = np.asarray(samples, dtype=np.int64)
    size = n_categories ** X.shape[1]
    counts = np.bincount(state_index(X, n_categories), minlength=size)
    return counts / X.shape[0]


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return float(min(0.5 * np.abs(np.asarray(p) - np.asarray(q)).sum(), 1.0))


def compare_to_exact(
    samples: np.ndarray,
    model: EnergyModel,
    exact: Optional[DenseDistribution] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DistributionReport:
    """
    Distance between sampled states and the exact target.

    Args:
        samples: (T, N) stack of states
        model: Model the samples target
        exact: Pre-enumerated target; enumerated here when omitted
        cap: Enumeration cap

    Returns:
        DistributionReport with TV, KL(empirical || exact) and the largest
        per-site marginal error

    Raises:
        EmptyRunError: If there are no samples
        ShapeError: If the samples do not match the model
        CapacityError: If the model is too large to enumerate
    """
    X = np.asarray(samples)
    if X.ndim != 2 or X.shape[1] != model.n_sites:
        raise ShapeError(f"Samples must have shape (T, {model.n_sites}), got {X.shape}")
    if X.shape[0] == 0:
        raise EmptyRunError("No samples to compare")
    if exact is None:
        exact = model.enumerate_distribution(cap)

    p_hat = empirical_distribution(X, model.n_categories)
    pi = exact.probs
    seen = p_hat > 0
    with np.errstate(divide="ignore"):
        kl = float(np.sum(p_hat[seen] * (np.log(p_hat[seen]) - np.log(pi[seen]))))

    empirical_marginals = np.stack(
        [np.bincount(X[:, n], minlength=model.n_categories) for n in range(model.n_sites)]
    ) / X.shape[0]
    marginal_error = float(np.abs(empirical_marginals - exact.marginals()).max())

    return DistributionReport(
        tv_distance=total_variation(p_hat, pi),
        kl_empirical_to_exact=max(kl, 0.0),
        marginal_max_error=min(marginal_error, 1.0),
        n_samples=int(X.shape[0]),
    )
