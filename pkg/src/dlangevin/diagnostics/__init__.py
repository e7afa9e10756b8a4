"""
Diagnostics Module

Turns finished chains into evaluation quantities: effective sample size,
distances to the enumerated target and flat result rows.
"""

from .base import (
    DiagnosticsException,
    DistributionReport,
    EmptyRunError,
    EssReport,
    TraceTooShortError,
)
from .ess import MIN_TRACE_LENGTH, autocorrelation, ess, multi_chain_ess
from .exact import compare_to_exact, empirical_distribution, total_variation
from .summary import CSV_COLUMNS, ResultRow, format_cell, read_rows, summarize, write_rows

__all__ = [
    # Reports
    "EssReport",
    "DistributionReport",
    "ResultRow",
    # Exceptions
    "DiagnosticsException",
    "TraceTooShortError",
    "EmptyRunError",
    # ESS
    "MIN_TRACE_LENGTH",
    "autocorrelation",
    "ess",
    "multi_chain_ess",
    # Exact comparison
    "compare_to_exact",
    "empirical_distribution",
    "total_variation",
    # Rows
    "CSV_COLUMNS",
    "format_cell",
    "summarize",
    "write_rows",
    "read_rows",
]
