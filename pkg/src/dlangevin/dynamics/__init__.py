"""
Dynamics Module

Weight functions, rate rows, per-site transition rows, and the exact
oracles (matrix exponential, Gillespie paths, gradient-flow integration)
used to check every discretisation.
"""

from .base import (
    ROW_TOLERANCE,
    DomainError,
    DynamicsException,
    FullRateMatrix,
    RateRow,
    StepSizeError,
    TransitionRow,
)
from .weights import WeightFunction, log_g
from .rates import (
    full_rate_matrix,
    log_rate_table,
    rate_row,
    rate_table,
    rates_from_ratios,
    site_log_ratios,
)
from .transitions import (
    NU_FLOOR,
    dmala_row,
    dmala_rows,
    euler_row,
    euler_rows,
    interpolated_row,
    interpolated_rows,
    stationary_rows,
)
from .expm import check_rate_matrix, matrix_exponential
from .flow import (
    FlowPoint,
    FlowTrajectory,
    conductance_flow,
    integrate_dwgf,
    kl_divergence,
    master_equation_flow,
)
from .gillespie import (
    GillespiePath,
    JumpEvent,
    draw_jump,
    first_jump,
    first_jump_law,
    gillespie_path,
)

__all__ = [
    # Types and exceptions
    "ROW_TOLERANCE",
    "DynamicsException",
    "DomainError",
    "StepSizeError",
    "RateRow",
    "TransitionRow",
    "FullRateMatrix",
    # Weights and rates
    "WeightFunction",
    "log_g",
    "site_log_ratios",
    "log_rate_table",
    "rates_from_ratios",
    "rate_table",
    "rate_row",
    "full_rate_matrix",
    # Transition rows
    "NU_FLOOR",
    "stationary_rows",
    "interpolated_rows",
    "interpolated_row",
    "euler_rows",
    "euler_row",
    "dmala_rows",
    "dmala_row",
    # Oracles
    "check_rate_matrix",
    "matrix_exponential",
    "FlowPoint",
    "FlowTrajectory",
    "integrate_dwgf",
    "kl_divergence",
    "conductance_flow",
    "master_equation_flow",
    "JumpEvent",
    "GillespiePath",
    "draw_jump",
    "first_jump",
    "first_jump_law",
    "gillespie_path",
]
