"""
Energy Model Module

Provides the discrete target distributions: Bernoulli, Ising/Potts, FHMM
and RBM energies with exact local conditionals, relaxation gradients,
parameter generation and brute-force enumeration.
"""

from .base import (
    BaseElement,
    CapacityError,
    EnergyModel,
    EvalCounter,
    FrozenElement,
    LocalRatios,
    ModelException,
    ModelParams,
    ShapeError,
    SiteIndexError,
    State,
)
from .types import (
    DEFAULT_ENUMERATION_CAP,
    ModelFamily,
    RatioSource,
    SamplerKind,
    Scale,
    TuningStatus,
    WeightKind,
)
from .distribution import (
    MASS_TOLERANCE,
    DenseDistribution,
    enumerate_states,
    index_state,
    state_index,
)

# Model families
from .bernoulli_model import BernoulliModel, BernoulliParams
from .ising_model import IsingPottsModel, IsingPottsParams, square_lattice_edges
from .fhmm_model import FhmmModel, FhmmParams, fhmm_generate_observations
from .rbm_model import RbmModel, RbmParams

# Generation and presets
from .factory import (
    MODEL_REGISTRY,
    PARAMS_REGISTRY,
    build_model,
    generate_params,
    inner_mask,
)
from .presets import (
    ACCEPT_TARGET,
    PRESETS,
    RWM_ACCEPT_TARGET,
    default_samplers,
    list_presets,
    preset_document,
    preset_family,
    preset_shape,
)

__all__ = [
    # Base
    "BaseElement",
    "FrozenElement",
    "State",
    "EvalCounter",
    "LocalRatios",
    "ModelParams",
    "EnergyModel",
    # Exceptions
    "ModelException",
    "ShapeError",
    "SiteIndexError",
    "CapacityError",
    # Types
    "ModelFamily",
    "WeightKind",
    "RatioSource",
    "SamplerKind",
    "Scale",
    "TuningStatus",
    "DEFAULT_ENUMERATION_CAP",
    # Enumeration
    "MASS_TOLERANCE",
    "DenseDistribution",
    "enumerate_states",
    "state_index",
    "index_state",
    # Families
    "BernoulliModel",
    "BernoulliParams",
    "IsingPottsModel",
    "IsingPottsParams",
    "square_lattice_edges",
    "FhmmModel",
    "FhmmParams",
    "fhmm_generate_observations",
    "RbmModel",
    "RbmParams",
    # Generation
    "MODEL_REGISTRY",
    "PARAMS_REGISTRY",
    "build_model",
    "generate_params",
    "inner_mask",
    "ACCEPT_TARGET",
    "RWM_ACCEPT_TARGET",
    "PRESETS",
    "default_samplers",
    "list_presets",
    "preset_document",
    "preset_family",
    "preset_shape",
]
