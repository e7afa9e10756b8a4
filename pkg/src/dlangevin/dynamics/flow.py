"""
Discrete Wasserstein gradient flow on an enumerated state space.

integrate_dwgf solves the forward equation d rho / dt = rho Q with classic
RK4; conductance_flow evaluates the same vector field in its gradient-flow
form, where each edge carries the logarithmic mean of the two directed
transition amounts m_ij = w_ij g(pi_j / pi_i) rho_i.
"""

from typing import List, Optional, Union
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..model.distribution import DenseDistribution
from ..model.types import WeightKind
from .base import DomainError, DynamicsException, FullRateMatrix, StepSizeError
from .weights import log_g

logger = logging.getLogger(__name__)

PROB_FLOOR = 1e-300
NEGATIVE_TOLERANCE = 1e-12
DRIFT_PER_UNIT_TIME = 1e-9
LOG_MEAN_CUTOFF = 1e-9


def kl_divergence(rho: np.ndarray, pi: np.ndarray) -> float:
    """KL(rho || pi); inf when rho puts mass where pi has none."""
    rho = np.asarray(rho, dtype=np.float64)
    pi = np.asarray(pi, dtype=np.float64)
    support = rho > 0
    if np.any(pi[support] <= 0):
        return math.inf
    return float(np.sum(rho[support] * (np.log(rho[support]) - np.log(pi[support]))))


class FlowPoint(BaseModel):
    """One recorded point of a flow trajectory."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    t: float = Field(..., ge=0)
    rho: np.ndarray
    kl: float


class FlowTrajectory(BaseModel):
    """Recorded (t, rho, KL(rho || pi)) points, starting at t = 0."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    points: List[FlowPoint] = Field(default_factory=list)
    dt: float = Field(..., gt=0, description="Integration step")

    @property
    def times(self) -> np.ndarray:
        return np.array([p.t for p in self.points])

    @property
    def kl(self) -> np.ndarray:
        return np.array([p.kl for p in self.points])

    @property
    def final(self) -> FlowPoint:
        return self.points[-1]


def default_step(Q: np.ndarray) -> float:
    """min(0.01, 0.1 / max |q_ii|)."""
    max_exit = float(np.max(-np.diag(Q)))
    if max_exit <= 0:
        return 0.01
    return min(0.01, 0.1 / max_exit)


def integrate_dwgf(
    Q: Union[FullRateMatrix, np.ndarray],
    rho0: DenseDistribution,
    t_end: float,
    dt: Optional[float] = None,
    pi: Optional[DenseDistribution] = None,
    record_every: int = 1,
) -> FlowTrajectory:
    """
    Integrate d rho / dt = rho Q from rho0 up to t_end with RK4.

    Each step is renormalised; mass drift beyond 1e-9 per unit time is an
    error. The last step is shortened so the trajectory ends at t_end.

    Args:
        Q: Full rate matrix (its pi is used when pi is not given)
        rho0: Initial distribution
        t_end: End time (>= 0)
        dt: Step size; defaults to min(0.01, 0.1 / max |q_ii|)
        pi: Target for the KL column
        record_every: Record one point every this many steps

    Returns:
        Trajectory of (t, rho, KL)

    Raises:
        DomainError: On dt <= 0, t_end < 0 or a missing target
        StepSizeError: If a step produces probabilities below -1e-12
    """
    if isinstance(Q, FullRateMatrix):
        pi = Q.pi if pi is None else pi
        generator = Q.Q
    else:
        generator = np.asarray(Q, dtype=np.float64)
    if pi is None:
        raise DomainError("integrate_dwgf needs the target pi")
    if t_end < 0:
        raise DomainError(f"t_end must be non-negative, got {t_end}")
    if dt is None:
        dt = default_step(generator)
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    if rho0.size != generator.shape[0]:
        raise DomainError(f"rho0 has {rho0.size} states, Q has {generator.shape[0]}")

    target = pi.probs
    rho = np.array(rho0.probs)
    n_steps = math.ceil(t_end / dt) if t_end > 0 else 0
    step = t_end / n_steps if n_steps else dt
    trajectory = FlowTrajectory(dt=step)
    trajectory.points.append(FlowPoint(t=0.0, rho=rho.copy(), kl=kl_divergence(rho, target)))

    def field(r: np.ndarray) -> np.ndarray:
        return r @ generator

    for k in range(1, n_steps + 1):
        k1 = field(rho)
        k2 = field(rho + 0.5 * step * k1)
        k3 = field(rho + 0.5 * step * k2)
        k4 = field(rho + step * k3)
        rho = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if rho.min() < -NEGATIVE_TOLERANCE:
            raise StepSizeError(
                f"Step {step} produced probability {rho.min()!r} at t={k * step}"
            )
        rho = np.maximum(rho, 0.0)
        drift = abs(rho.sum() - 1.0)
        if drift > DRIFT_PER_UNIT_TIME * step:
            raise DynamicsException(f"Mass drift {drift!r} exceeds tolerance at t={k * step}")
        rho /= rho.sum()
        if k % record_every == 0 or k == n_steps:
            t = t_end if k == n_steps else k * step
            trajectory.points.append(FlowPoint(t=t, rho=rho.copy(), kl=kl_divergence(rho, target)))

    logger.debug(f"Integrated {n_steps} RK4 steps of size {step}")
    return trajectory


def _positive(name: str, v: Union[DenseDistribution, np.ndarray]) -> np.ndarray:
    arr = np.asarray(v.probs if isinstance(v, DenseDistribution) else v, dtype=np.float64)
    if arr.ndim != 1 or np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be a strictly positive probability vector")
    return np.maximum(arr, PROB_FLOOR)


def _adjacency(size: int, adjacency: Optional[np.ndarray]) -> np.ndarray:
    if adjacency is None:
        w = np.ones((size, size))
    else:
        w = np.asarray(adjacency, dtype=np.float64)
        if w.shape != (size, size) or not np.allclose(w, w.T) or np.any(w < 0):
            raise DomainError("adjacency must be a symmetric non-negative matrix")
    w = w.copy()
    np.fill_diagonal(w, 0.0)
    return w


def transition_amounts(
    rho: np.ndarray,
    pi: np.ndarray,
    weight: Union[WeightKind, str],
    adjacency: Optional[np.ndarray] = None,
) -> np.ndarray:
    """log m_ij = log w_ij + log g(pi_j / pi_i) + log rho_i; -inf off the graph."""
    w = _adjacency(rho.size, adjacency)
    log_pi = np.log(pi)
    with np.errstate(divide="ignore"):
        log_w = np.log(w)
    return log_w + log_g(weight, log_pi[None, :] - log_pi[:, None]) + np.log(rho)[:, None]


def conductance_flow(
    rho: Union[DenseDistribution, np.ndarray],
    pi: Union[DenseDistribution, np.ndarray],
    energies: np.ndarray,
    weight: Union[WeightKind, str],
    adjacency: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Tangent vector d rho / dt of the gradient flow in conductance form.

    Coordinate j is sum_{i != j} c_ij (f_i + log rho_i - f_j - log rho_j)
    with c_ij the logarithmic mean of m_ij and m_ji; when the logs differ by
    less than 1e-9 the mean is taken as m_ij.

    Args:
        rho: Current distribution, strictly positive
        pi: Target, strictly positive
        energies: f over the same states (pi proportional to exp(-f))
        weight: Weight function kind
        adjacency: Symmetric edge weights w; defaults to the complete graph

    Returns:
        Vector summing to 0

    Raises:
        DomainError: On zero, negative or non-finite probabilities
    """
    r = _positive("rho", rho)
    p = _positive("pi", pi)
    f = np.asarray(energies, dtype=np.float64)
    if f.shape != r.shape or p.shape != r.shape:
        raise DomainError("rho, pi and energies must have the same length")
    log_m = transition_amounts(r, p, weight, adjacency)
    edge = np.isfinite(log_m)
    log_m_rev = log_m.T
    with np.errstate(invalid="ignore"):
        delta = np.where(edge, log_m - log_m_rev, 0.0)
    m = np.where(edge, np.exp(np.where(edge, log_m, 0.0)), 0.0)
    m_max = np.maximum(m, m.T)
    gap = np.abs(delta)
    near = gap < LOG_MEAN_CUTOFF
    safe = np.where(near, 1.0, gap)
    # (m_ij - m_ji) / delta == m_max * (1 - exp(-|delta|)) / |delta|
    conductance = np.where(near, m, -m_max * np.expm1(-safe) / safe)
    conductance = np.where(edge, conductance, 0.0)
    potential = f + np.log(r)
    force = potential[:, None] - potential[None, :]
    return (conductance * force).sum(axis=0)


def master_equation_flow(
    rho: Union[DenseDistribution, np.ndarray],
    pi: Union[DenseDistribution, np.ndarray],
    weight: Union[WeightKind, str],
    adjacency: Optional[np.ndarray] = None,
) -> np.ndarray:
    """The simplified flow: coordinate j = sum_i (m_ij - m_ji), i.e. rho Q."""
    r = _positive("rho", rho)
    p = _positive("pi", pi)
    m = np.exp(transition_amounts(r, p, weight, adjacency))
    return (m - m.T).sum(axis=0)
