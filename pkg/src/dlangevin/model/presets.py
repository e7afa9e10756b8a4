"""
Preset catalogue of the benchmark model regimes.

Each preset names a family and two shape configs: ``paper`` keeps the
published dimensions, ``desk`` shrinks them for laptop runs. Shape configs
feed generate_params; preset_document wraps one into a full experiment
config.

Inner part of an Ising/Potts lattice: the centred square of side
L - 2 * ceil(L / 4). RBM weights are random N(0, 0.1^2) because trained
parameters are not shipped.
"""

from typing import Any, Dict, List
import copy

from .types import ModelFamily, SamplerKind, Scale, WeightKind

ACCEPT_TARGET = 0.574
RWM_ACCEPT_TARGET = 0.234

_FHMM_BINARY = {"first_prob": 0.9, "stay_prob": 0.8, "sigma": 2.0, "weight_scale": 1.0}
_RBM = {"weight_scale": 0.1, "bias_scale": 0.1}


PRESETS: Dict[str, Dict[str, Any]] = {
    "bernoulli-high": {
        "family": ModelFamily.BERNOULLI,
        "paper": {"n_sites": 10000, "n_categories": 2, "sigma2": 0.125},
        "desk": {"n_sites": 100, "n_categories": 2, "sigma2": 0.125},
    },
    "bernoulli-low": {
        "family": ModelFamily.BERNOULLI,
        "paper": {"n_sites": 10000, "n_categories": 2, "sigma2": 12.5},
        "desk": {"n_sites": 100, "n_categories": 2, "sigma2": 12.5},
    },
    "bernoulli-c4": {
        "family": ModelFamily.BERNOULLI,
        "paper": {"n_sites": 2000, "n_categories": 4, "sigma2": 1.125},
        "desk": {"n_sites": 50, "n_categories": 4, "sigma2": 1.125},
    },
    "bernoulli-c8": {
        "family": ModelFamily.BERNOULLI,
        "paper": {"n_sites": 2000, "n_categories": 8, "sigma2": 1.125},
        "desk": {"n_sites": 50, "n_categories": 8, "sigma2": 1.125},
    },
    "ising-high": {
        "family": ModelFamily.ISING,
        "paper": {"side": 50, "n_categories": 2, "lambda": 0.5,
                  "outer": [-2.0, 1.0], "inner": [-1.0, 2.0]},
        "desk": {"side": 16, "n_categories": 2, "lambda": 0.5,
                 "outer": [-2.0, 1.0], "inner": [-1.0, 2.0]},
    },
    "ising-low": {
        "family": ModelFamily.ISING,
        "paper": {"side": 50, "n_categories": 2, "lambda": 1.0,
                  "outer": [-4.0, 2.0], "inner": [-2.0, 4.0]},
        "desk": {"side": 16, "n_categories": 2, "lambda": 1.0,
                 "outer": [-4.0, 2.0], "inner": [-2.0, 4.0]},
    },
    "potts-c4": {
        "family": ModelFamily.ISING,
        "paper": {"side": 30, "n_categories": 4, "lambda": 1.0,
                  "outer": [-1.5, 1.5], "inner": [-1.5, 1.5], "category_shift": 0.5},
        "desk": {"side": 10, "n_categories": 4, "lambda": 1.0,
                 "outer": [-1.5, 1.5], "inner": [-1.5, 1.5], "category_shift": 0.5},
    },
    "potts-c8": {
        "family": ModelFamily.ISING,
        "paper": {"side": 30, "n_categories": 8, "lambda": 1.0,
                  "outer": [-1.5, 1.5], "inner": [-1.5, 1.5], "category_shift": 0.5},
        "desk": {"side": 10, "n_categories": 8, "lambda": 1.0,
                 "outer": [-1.5, 1.5], "inner": [-1.5, 1.5], "category_shift": 0.5},
    },
    "fhmm-high": {
        "family": ModelFamily.FHMM,
        "paper": {"length": 200, "factors": 10, "n_categories": 2, **_FHMM_BINARY},
        "desk": {"length": 20, "factors": 5, "n_categories": 2, **_FHMM_BINARY},
    },
    "fhmm-low": {
        "family": ModelFamily.FHMM,
        "paper": {"length": 100, "factors": 20, "n_categories": 2, **_FHMM_BINARY},
        "desk": {"length": 10, "factors": 10, "n_categories": 2, **_FHMM_BINARY},
    },
    "fhmm-c4": {
        "family": ModelFamily.FHMM,
        "paper": {"length": 200, "factors": 10, "n_categories": 4, **_FHMM_BINARY},
        "desk": {"length": 20, "factors": 5, "n_categories": 4, **_FHMM_BINARY},
    },
    "fhmm-c8": {
        "family": ModelFamily.FHMM,
        "paper": {"length": 200, "factors": 10, "n_categories": 8, **_FHMM_BINARY},
        "desk": {"length": 20, "factors": 5, "n_categories": 8, **_FHMM_BINARY},
    },
    "rbm-high": {
        "family": ModelFamily.RBM,
        "paper": {"n_visible": 784, "n_hidden": 25, "n_categories": 2, **_RBM},
        "desk": {"n_visible": 64, "n_hidden": 8, "n_categories": 2, **_RBM},
    },
    "rbm-low": {
        "family": ModelFamily.RBM,
        "paper": {"n_visible": 784, "n_hidden": 200, "n_categories": 2, **_RBM},
        "desk": {"n_visible": 64, "n_hidden": 64, "n_categories": 2, **_RBM},
    },
    "rbm-c4": {
        "family": ModelFamily.RBM,
        "paper": {"n_visible": 784, "n_hidden": 100, "n_categories": 4, **_RBM},
        "desk": {"n_visible": 64, "n_hidden": 16, "n_categories": 4, **_RBM},
    },
    "rbm-c8": {
        "family": ModelFamily.RBM,
        "paper": {"n_visible": 784, "n_hidden": 100, "n_categories": 8, **_RBM},
        "desk": {"n_visible": 64, "n_hidden": 16, "n_categories": 8, **_RBM},
    },
}

# Chains x steps (burn-in) per scale
RUN_LENGTHS = {
    Scale.PAPER: {"chains": 100, "steps": 100000, "burn_in": 50000},
    Scale.DESK: {"chains": 10, "steps": 20000, "burn_in": 10000},
}


def list_presets() -> List[str]:
    return sorted(PRESETS)


def preset_shape(name: str, scale: Scale = Scale.DESK) -> Dict[str, Any]:
    """
    Shape config of a preset at the given scale.

    Raises:
        KeyError: If the preset is unknown
    """
    if name not in PRESETS:
        raise KeyError(f"Unknown preset '{name}'. Available: {', '.join(list_presets())}")
    return copy.deepcopy(PRESETS[name][Scale(scale).value])


def preset_family(name: str) -> ModelFamily:
    if name not in PRESETS:
        raise KeyError(f"Unknown preset '{name}'. Available: {', '.join(list_presets())}")
    return PRESETS[name]["family"]


def default_samplers(weight: WeightKind = WeightKind.SQRT) -> List[Dict[str, Any]]:
    """Benchmark sampler line-up with starting hyperparameters for the tuner."""
    w = WeightKind(weight).value
    return [
        {"kind": SamplerKind.RWM.value, "flips": 1, "target_rate": RWM_ACCEPT_TARGET},
        {"kind": SamplerKind.BLOCK_GIBBS.value, "block_size": 2},
        {"kind": SamplerKind.HAMMING_BALL.value, "block_size": 10},
        {"kind": SamplerKind.GWG.value, "weight": w},
        {"kind": SamplerKind.PAS.value, "weight": w, "flips": 3},
        {"kind": SamplerKind.DMALA.value, "weight": WeightKind.SQRT.value, "step": 1.0},
        {"kind": SamplerKind.DLMCF.value, "weight": w, "step": 0.1},
        {"kind": SamplerKind.DLMC.value, "weight": w, "step": 1.0},
    ]


def preset_document(name: str, scale: Scale = Scale.DESK, seed: int = 0) -> Dict[str, Any]:
    """
    Complete experiment config for a preset, as a JSON-ready dict.

    Args:
        name: Preset name, e.g. "ising-high"
        scale: paper or desk dimensions
        seed: Experiment seed written into the document

    Returns:
        Experiment config document
    """
    scale = Scale(scale)
    family = preset_family(name)
    return {
        "model": {"family": family.value, "preset": name, "scale": scale.value},
        "samplers": default_samplers(),
        **RUN_LENGTHS[scale],
        "seed": seed,
        "tuning": {"enabled": True, "target_rate": ACCEPT_TARGET, "adaptation_steps": 2000},
        "output": {"path": f"results/{name}", "record_timing": False},
    }
