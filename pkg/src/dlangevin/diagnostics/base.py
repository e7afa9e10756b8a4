"""
Diagnostics report types and exceptions.
"""

from typing import Optional

from pydantic import Field, model_validator

from ..model.base import BaseElement


class DiagnosticsException(Exception):
    """Base exception for diagnostics errors."""
    pass


class TraceTooShortError(DiagnosticsException):
    """Raised when a trace is too short for an ESS estimate."""
    pass


class EmptyRunError(DiagnosticsException):
    """Raised when a run record holds no steps."""
    pass


class EssReport(BaseElement):
    """
    Effective sample size of one scalar trace.

    ess_per_eval and ess_per_second are filled only when the evaluation
    count or the wall time is known.
    """

    ess: float = Field(..., ge=0, description="Effective sample size")
    length: int = Field(..., ge=1, description="Trace length L")
    ess_per_eval: Optional[float] = Field(None, ge=0)
    ess_per_second: Optional[float] = Field(None, ge=0)
    autocorr_cutoff_lag: int = Field(0, ge=0, description="Last lag summed")
    statistic: str = Field("energy", description="Name of the traced statistic")
    degenerate: bool = Field(False, description="Set for zero-variance traces")

    @model_validator(mode="after")
    def validate_bound(self) -> "EssReport":
        if self.ess > self.length:
            raise ValueError(f"ess ({self.ess}) exceeds trace length ({self.length})")
        return self


class DistributionReport(BaseElement):
    """Distance between an empirical sample and the enumerated target."""

    tv_distance: float = Field(..., ge=0, le=1)
    kl_empirical_to_exact: float = Field(..., ge=0)
    marginal_max_error: float = Field(..., ge=0, le=1)
    n_samples: int = Field(..., ge=1)
