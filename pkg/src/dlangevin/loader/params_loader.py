"""
JSON parameter files.

Layout::

    {"family": "ising", "n": 16, "c": 2,
     "side": 4, "lambda": 0.5,
     "theta": {"shape": [16, 2], "data": [...]}, ...}

Arrays sit at the top level next to the header, stored flat in row-major
order with their shape; FHMM observations are the top-level "observations"
array. Floats are written with 17 significant digits. Files that nest the
arrays under a "params" object are still read.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import json
import logging
import math

import numpy as np
import pydantic

from ..model.base import ModelParams
from ..model.factory import PARAMS_REGISTRY
from ..model.types import ModelFamily
from .base_loader import ConversionError, JsonLoader, ValidationError

HEADER_KEYS = ("family", "n", "c")
NESTED_KEY = "params"

_ARRAY = {
    "type": "object",
    "required": ["shape", "data"],
    "properties": {
        "shape": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "data": {"type": "array", "items": {"type": "number"}},
    },
    "additionalProperties": False,
}

_VALUE = {
    "anyOf": [
        _ARRAY,
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}},
    ]
}

PARAMS_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": list(HEADER_KEYS),
    "properties": {
        "family": {"enum": [f.value for f in ModelFamily]},
        "n": {"type": "integer", "minimum": 1},
        "c": {"type": "integer", "minimum": 2},
        NESTED_KEY: {"type": "object", "additionalProperties": _VALUE},
    },
    "additionalProperties": _VALUE,
}

_SKIPPED = {"family", "description", "metadata"}


def encode_array(arr: np.ndarray) -> Dict[str, Any]:
    return {"shape": list(arr.shape), "data": np.asarray(arr).ravel().tolist()}


def decode_array(value: Any, dtype: Any = np.float64) -> np.ndarray:
    """Array from a {"shape", "data"} object or a plain 1-D list."""
    if isinstance(value, dict):
        data = np.asarray(value["data"], dtype=dtype)
        return data.reshape(tuple(value["shape"]))
    return np.asarray(value, dtype=dtype)


def params_document(params: ModelParams) -> Dict[str, Any]:
    """JSON-ready document of a parameter set."""
    document: Dict[str, Any] = {
        "family": ModelFamily(params.family).value,
        "n": params.n_sites,
        "c": params.n_categories,
    }
    for name, info in type(params).model_fields.items():
        if name in _SKIPPED:
            continue
        value = getattr(params, name)
        if value is None:
            continue
        key = info.alias or name
        document[key] = encode_array(value) if isinstance(value, np.ndarray) else value
    return document


def format_json(value: Any, indent: int = 0) -> str:
    """
    JSON text with floats at 17 significant digits.

    Objects put one key per line; lists stay on one line.

    Raises:
        ConversionError: On NaN or infinite floats
    """
    if isinstance(value, dict):
        pad = " " * (indent + 1)
        items = [f"{pad}{json.dumps(str(k))}: {format_json(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_json(v, indent) for v in value) + "]"
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ConversionError(f"Cannot write non-finite value {value}")
        return format(float(value), ".17g")
    if isinstance(value, np.integer):
        return str(int(value))
    return json.dumps(value)


def save_params(params: ModelParams, path: Union[str, Path]) -> Path:
    """Write a parameter set as JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(format_json(params_document(params)))
        f.write("\n")
    return path


class ParamsLoader(JsonLoader[ModelParams]):
    """Loads model parameter files."""

    schema = PARAMS_SCHEMA

    def parameter_fields(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """
        The parameter entries of a document, flat or nested.

        Raises:
            ValidationError: If a nested "params" object is mixed with top-level entries
        """
        top: Dict[str, Any] = {
            k: v for k, v in data.items() if k not in HEADER_KEYS and k != NESTED_KEY
        }
        if NESTED_KEY not in data:
            return top
        if top:
            raise ValidationError(
                "Parameters must be either top-level or nested under 'params'",
                [f"{key}: outside 'params'" for key in sorted(top)],
            )
        nested: Dict[str, Any] = data[NESTED_KEY]
        return nested

    def to_model(self, data: Dict[str, Any]) -> ModelParams:
        """
        Build the family's parameter object.

        Raises:
            ValidationError: If the arrays are inconsistent or do not match n and c
            ConversionError: If an array cannot be reshaped
        """
        family = ModelFamily(data["family"])
        fields: Dict[str, Any] = {}
        try:
            for key, value in self.parameter_fields(data).items():
                if isinstance(value, (dict, list)):
                    dtype = np.int64 if key == "edges" else np.float64
                    fields[key] = decode_array(value, dtype)
                else:
                    fields[key] = value
        except (ValueError, TypeError) as e:
            raise ConversionError(f"Cannot rebuild array parameters: {e}") from e

        try:
            params = PARAMS_REGISTRY[family].model_validate(fields)
        except pydantic.ValidationError as e:
            raise ValidationError(
                f"Invalid {family.value} parameters",
                [f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()],
            ) from e

        errors: List[str] = []
        if params.n_sites != data["n"]:
            errors.append(f"n: file says {data['n']}, arrays give {params.n_sites}")
        if params.n_categories != data["c"]:
            errors.append(f"c: file says {data['c']}, arrays give {params.n_categories}")
        if errors:
            raise ValidationError("Parameter header does not match the arrays", errors)

        self.logger.info(f"Loaded {family.value} params N={params.n_sites} C={params.n_categories}")
        return params


def load_params(path: Union[str, Path], logger: Optional[logging.Logger] = None) -> ModelParams:
    return ParamsLoader(logger).load_and_convert(path)
