"""
Experiment config loader.

Structure is checked with a Draft-7 schema, semantic rules (burn_in <
steps, preset/family agreement, per-kind hyperparameters) by the pydantic
ExperimentConfig. Violations from either stage are reported together.
"""

from typing import Any, Dict, List, Optional
import logging

import pydantic

from ..model.types import ModelFamily, RatioSource, SamplerKind, Scale, WeightKind
from .base_loader import JsonLoader, ValidationError
from .experiment import MAX_SEED, ExperimentConfig

_SAMPLER = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": [k.value for k in SamplerKind]},
        "weight": {"enum": [w.value for w in WeightKind]},
        "step": {"type": "number", "minimum": 0},
        "flips": {"type": "integer", "minimum": 1},
        "block_size": {"type": "integer", "minimum": 1},
        "ratio_source": {"enum": [r.value for r in RatioSource]},
        "target_rate": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    },
    "additionalProperties": False,
}

EXPERIMENT_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["model", "samplers", "chains", "steps"],
    "properties": {
        "model": {
            "type": "object",
            "required": ["family"],
            "properties": {
                "family": {"enum": [f.value for f in ModelFamily]},
                "preset": {"type": "string"},
                "scale": {"enum": [s.value for s in Scale]},
                "params_file": {"type": "string"},
                "overrides": {"type": "object"},
                "params_seed": {"type": "integer", "minimum": 0, "maximum": MAX_SEED},
            },
            "additionalProperties": False,
        },
        "samplers": {"type": "array", "minItems": 1, "items": _SAMPLER},
        "chains": {"type": "integer", "minimum": 1},
        "steps": {"type": "integer", "minimum": 1},
        "burn_in": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0, "maximum": MAX_SEED},
        "tuning": {
            "type": "object",
            "properties": {
                "enabled": {"type": "boolean"},
                "target_rate": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "adaptation_steps": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {
                "path": {"type": "string"},
                "record_timing": {"type": "boolean"},
                "compare_exact": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


def _pydantic_errors(error: pydantic.ValidationError) -> List[str]:
    out = []
    for err in error.errors():
        where = "/".join(str(p) for p in err["loc"]) or "<root>"
        out.append(f"{where}: {err['msg']}")
    return out


class ConfigLoader(JsonLoader[ExperimentConfig]):
    """Loads experiment configs."""

    schema = EXPERIMENT_SCHEMA

    def validate(self, data: Dict[str, Any]) -> bool:
        """
        Run both validation stages and report every violation.

        Raises:
            ValidationError: With the combined list of violations
        """
        errors = self.schema_errors(data)
        try:
            ExperimentConfig.model_validate(data)
        except pydantic.ValidationError as e:
            errors.extend(msg for msg in _pydantic_errors(e) if msg not in errors)
        if errors:
            raise ValidationError(f"{len(errors)} config violation(s)", errors)
        return True

    def to_model(self, data: Dict[str, Any]) -> ExperimentConfig:
        config = ExperimentConfig.model_validate(data)
        self.logger.info(
            f"Experiment on {config.model.name}: {len(config.samplers)} sampler(s), "
            f"{config.chains} chain(s) x {config.steps} steps"
        )
        return config


def load_config(path: str, logger: Optional[logging.Logger] = None) -> ExperimentConfig:
    return ConfigLoader(logger).load_and_convert(path)
