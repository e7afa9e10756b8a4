"""
Service package: the experiment runner and the validation suite.
"""

from .experiment_service import (
    THREADS_ENV,
    TUNING_STREAM,
    ChainTask,
    ConfigurationError,
    ExecutionError,
    ExperimentResult,
    ExperimentService,
    ExperimentServiceException,
    ValidationFailedError,
    resolve_threads,
    run_chain_task,
)
from .validation_service import (
    MUTATIONS,
    PROFILES,
    CheckResult,
    ValidationReport,
    ValidationService,
    corrupted_interpolated_rows,
)

__all__ = [
    # Experiments
    'ExperimentService',
    'ExperimentResult',
    'ChainTask',
    'run_chain_task',
    'resolve_threads',
    'THREADS_ENV',
    'TUNING_STREAM',
    # Validation
    'ValidationService',
    'ValidationReport',
    'CheckResult',
    'corrupted_interpolated_rows',
    'PROFILES',
    'MUTATIONS',
    # Exceptions
    'ExperimentServiceException',
    'ConfigurationError',
    'ExecutionError',
    'ValidationFailedError',
]
