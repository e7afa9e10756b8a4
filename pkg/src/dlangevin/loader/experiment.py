"""
Experiment configuration records.
"""

from typing import Any, Dict, List, Optional

from pydantic import Field, model_validator

from ..model.base import BaseElement
from ..model.presets import ACCEPT_TARGET, RWM_ACCEPT_TARGET, list_presets, preset_family
from ..model.types import ModelFamily, SamplerKind, Scale
from ..sampler.base import SamplerConfig

MAX_SEED = 2**64 - 1


class ModelSpec(BaseElement):
    """
    Which target to sample.

    Either a preset (optionally with shape overrides) or a parameter file.
    Generated parameters are drawn with params_seed, or the experiment seed
    when unset.
    """

    family: ModelFamily = Field(..., description="Model family")
    preset: Optional[str] = Field(None, description="Preset name")
    scale: Scale = Field(Scale.DESK, description="Preset scale")
    params_file: Optional[str] = Field(None, description="Path of a JSON parameter file")
    overrides: Dict[str, Any] = Field(default_factory=dict, description="Preset shape overrides")
    params_seed: Optional[int] = Field(None, ge=0, le=MAX_SEED)

    @model_validator(mode="after")
    def validate_source(self) -> "ModelSpec":
        if (self.preset is None) == (self.params_file is None):
            raise ValueError("model needs exactly one of 'preset' or 'params_file'")
        if self.preset is not None:
            if self.preset not in list_presets():
                raise ValueError(f"unknown preset '{self.preset}'")
            if preset_family(self.preset) is not self.family:
                raise ValueError(
                    f"preset '{self.preset}' is a {preset_family(self.preset).value} model, "
                    f"not {self.family.value}"
                )
        return self

    @property
    def name(self) -> str:
        return self.preset or self.family.value


class TuningSpec(BaseElement):
    enabled: bool = Field(False)
    target_rate: float = Field(ACCEPT_TARGET, gt=0, lt=1)
    adaptation_steps: int = Field(2000, ge=1)

    def target_for(self, config: SamplerConfig) -> float:
        """Per-sampler target, the RWM default, or the experiment target."""
        if config.target_rate is not None:
            return config.target_rate
        if config.kind is SamplerKind.RWM:
            return RWM_ACCEPT_TARGET
        return self.target_rate


class OutputSpec(BaseElement):
    path: str = Field("results", description="Output directory")
    record_timing: bool = Field(False, description="Emit ess_per_second")
    compare_exact: bool = Field(True, description="TV to the enumerated target when enumerable")


class ExperimentConfig(BaseElement):
    """A complete experiment: model, samplers, run lengths, seed, tuning, output."""

    model: ModelSpec
    samplers: List[SamplerConfig] = Field(..., min_length=1)
    chains: int = Field(..., ge=1)
    steps: int = Field(..., ge=1)
    burn_in: int = Field(0, ge=0)
    seed: int = Field(0, ge=0, le=MAX_SEED)
    tuning: TuningSpec = Field(default_factory=TuningSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode="after")
    def validate_lengths(self) -> "ExperimentConfig":
        if self.burn_in >= self.steps:
            raise ValueError(f"burn_in ({self.burn_in}) must be smaller than steps ({self.steps})")
        return self
