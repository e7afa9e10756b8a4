"""
Loader Package

JSON loaders for experiment configs and model parameter files:
- Experiment configs (Draft-7 schema + pydantic rules)
- Parameter files (arrays as shape + flat data)
"""

from .base_loader import (
    BaseLoader,
    ConversionError,
    FileNotFoundError,
    JsonLoader,
    LoaderException,
    ParserError,
    UnsupportedFormatError,
    ValidationError,
)
from .experiment import ExperimentConfig, ModelSpec, OutputSpec, TuningSpec
from .config_loader import EXPERIMENT_SCHEMA, ConfigLoader, load_config
from .params_loader import (
    PARAMS_SCHEMA,
    ParamsLoader,
    decode_array,
    encode_array,
    format_json,
    load_params,
    params_document,
    save_params,
)

__all__ = [
    # Base classes
    "BaseLoader",
    "JsonLoader",
    # Exceptions
    "LoaderException",
    "FileNotFoundError",
    "ParserError",
    "ValidationError",
    "ConversionError",
    "UnsupportedFormatError",
    # Experiment configs
    "ExperimentConfig",
    "ModelSpec",
    "TuningSpec",
    "OutputSpec",
    "EXPERIMENT_SCHEMA",
    "ConfigLoader",
    "load_config",
    # Parameter files
    "PARAMS_SCHEMA",
    "ParamsLoader",
    "encode_array",
    "decode_array",
    "format_json",
    "params_document",
    "save_params",
    "load_params",
]
