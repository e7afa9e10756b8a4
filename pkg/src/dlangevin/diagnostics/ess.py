"""
Effective sample size.

Autocorrelations come from a zero-padded FFT of the centred trace; the sum
is truncated with Geyer's initial monotone positive sequence.
"""

from typing import Iterable, Optional, Tuple

import numpy as np
from scipy import fft

from ..model.types import ArrayLike
from .base import EssReport, TraceTooShortError

MIN_TRACE_LENGTH = 10


def autocorrelation(trace: np.ndarray) -> np.ndarray:
    """Normalised autocorrelation rho_0..rho_{L-1} (biased estimator)."""
    x = np.asarray(trace, dtype=np.float64)
    x = x - x.mean()
    n = x.size
    size = fft.next_fast_len(2 * n)
    spectrum = fft.rfft(x, size)
    acov = fft.irfft(spectrum * np.conj(spectrum), size)[:n] / n
    return acov / acov[0]


def _geyer_sum(rho: np.ndarray) -> Tuple[float, int]:
    """Sum of the initial monotone positive pair sequence and the last lag used."""
    n_pairs = rho.size // 2
    pairs = rho[: 2 * n_pairs : 2] + rho[1 : 2 * n_pairs : 2]
    total = 0.0
    last_lag = 0
    running = np.inf
    for k, gamma in enumerate(pairs):
        if gamma <= 0:
            break
        running = min(running, gamma)
        total += running
        last_lag = 2 * k + 1
    return total, last_lag


def ess(
    trace: ArrayLike,
    energy_evals: Optional[int] = None,
    wall_time: Optional[float] = None,
    statistic: str = "energy",
) -> EssReport:
    """
    Effective sample size of a scalar trace.

    ESS = L / tau with tau = -1 + 2 * sum of the truncated pair sums, capped
    at L. A zero-variance trace gives ESS 0 with the degenerate flag set.

    Args:
        trace: Scalar statistic per step
        energy_evals: Evaluations spent producing the trace
        wall_time: Seconds spent producing the trace
        statistic: Name recorded in the report

    Returns:
        EssReport

    Raises:
        TraceTooShortError: If the trace has fewer than 10 points
    """
    x = np.asarray(trace, dtype=np.float64).ravel()
    n = x.size
    if n < MIN_TRACE_LENGTH:
        raise TraceTooShortError(f"ESS needs at least {MIN_TRACE_LENGTH} points, got {n}")

    if np.ptp(x) == 0:
        value, lag, degenerate = 0.0, 0, True
    else:
        total, lag = _geyer_sum(autocorrelation(x))
        tau = -1.0 + 2.0 * total
        value = float(n) if tau <= 0 else min(n / tau, float(n))
        degenerate = False

    per_eval = value / energy_evals if energy_evals else None
    per_second = value / wall_time if wall_time else None
    return EssReport(
        ess=value,
        length=n,
        ess_per_eval=per_eval,
        ess_per_second=per_second,
        autocorr_cutoff_lag=lag,
        statistic=statistic,
        degenerate=degenerate,
    )


def multi_chain_ess(reports: Iterable[EssReport]) -> float:
    """ESS of independent chains: the sum of the per-chain values."""
    return float(sum(report.ess for report in reports))
