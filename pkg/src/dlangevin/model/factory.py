"""
Parameter generation and model construction for every family.

generate_params draws a parameter set from a shape config and a seed; the
same (family, config, seed) always yields identical arrays.
"""

from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, Type
import logging
import math

import numpy as np

from .base import EnergyModel, ModelParams
from .bernoulli_model import BernoulliModel, BernoulliParams
from .fhmm_model import FhmmModel, FhmmParams, fhmm_generate_observations
from .ising_model import IsingPottsModel, IsingPottsParams
from .rbm_model import RbmModel, RbmParams
from .types import ModelFamily

logger = logging.getLogger(__name__)


MODEL_REGISTRY: Dict[ModelFamily, Type[EnergyModel]] = {
    ModelFamily.BERNOULLI: BernoulliModel,
    ModelFamily.ISING: IsingPottsModel,
    ModelFamily.FHMM: FhmmModel,
    ModelFamily.RBM: RbmModel,
}

PARAMS_REGISTRY: Dict[ModelFamily, Type[ModelParams]] = {
    ModelFamily.BERNOULLI: BernoulliParams,
    ModelFamily.ISING: IsingPottsParams,
    ModelFamily.FHMM: FhmmParams,
    ModelFamily.RBM: RbmParams,
}


def build_model(params: ModelParams, logger: Optional[logging.Logger] = None) -> EnergyModel:
    """Instantiate the energy model matching the parameter family."""
    return MODEL_REGISTRY[ModelFamily(params.family)](params, logger)


def inner_mask(side: int) -> np.ndarray:
    """
    Boolean side x side mask of the lattice's inner part.

    The inner part is the centred square of side L - 2 * ceil(L / 4); the
    rest of the lattice is the outer part.
    """
    margin = math.ceil(side / 4)
    mask = np.zeros((side, side), dtype=bool)
    if side - 2 * margin > 0:
        mask[margin:side - margin, margin:side - margin] = True
    return mask


def _bernoulli(config: Mapping[str, Any], rng: np.random.Generator) -> BernoulliParams:
    n = int(config["n_sites"])
    c = int(config.get("n_categories", 2))
    scale = math.sqrt(float(config.get("sigma2", 1.0)))
    return BernoulliParams(theta=rng.normal(0.0, scale, size=(n, c)))


def _ising(config: Mapping[str, Any], rng: np.random.Generator) -> IsingPottsParams:
    side = int(config["side"])
    c = int(config.get("n_categories", 2))
    outer: Sequence[float] = config.get("outer", (-1.5, 1.5))
    inner: Sequence[float] = config.get("inner", outer)
    mask = inner_mask(side).ravel()
    n = side * side
    if c == 2:
        # field on category 1 only
        field = np.where(
            mask,
            rng.uniform(inner[0], inner[1], size=n),
            rng.uniform(outer[0], outer[1], size=n),
        )
        theta = np.stack([np.zeros(n), field], axis=1)
    else:
        shift = float(config.get("category_shift", 0.5)) * np.arange(1, c + 1) / c
        inner_draw = rng.uniform(inner[0], inner[1], size=(n, c)) + shift
        outer_draw = rng.uniform(outer[0], outer[1], size=(n, c)) - shift
        theta = np.where(mask[:, None], inner_draw, outer_draw)
    return IsingPottsParams(side=side, theta=theta, lam=float(config.get("lambda", 1.0)))


def _chain_logits(
    first: float, stay: float, factors: int, c: int
) -> Tuple[np.ndarray, np.ndarray]:
    init = np.full(c, (1.0 - first) / (c - 1))
    init[0] = first
    trans = np.full((c, c), (1.0 - stay) / (c - 1))
    np.fill_diagonal(trans, stay)
    init_logits = np.tile(np.log(init), (factors, 1))
    trans_logits = np.tile(np.log(trans), (factors, 1, 1))
    return init_logits, trans_logits


def _fhmm(config: Mapping[str, Any], rng: np.random.Generator) -> FhmmParams:
    length = int(config["length"])
    factors = int(config["factors"])
    c = int(config.get("n_categories", 2))
    init_logits, trans_logits = _chain_logits(
        float(config.get("first_prob", 0.9)), float(config.get("stay_prob", 0.8)), factors, c
    )
    W = rng.normal(0.0, float(config.get("weight_scale", 1.0)), size=(factors, c))
    b = float(config["b"]) if "b" in config else float(rng.normal())
    params = FhmmParams(
        length=length,
        factors=factors,
        init_logits=init_logits,
        transition_logits=trans_logits,
        W=W,
        b=b,
        sigma=float(config.get("sigma", 2.0)),
    )
    obs_seed = int(rng.integers(0, 2 ** 63 - 1))
    return params.with_observations(fhmm_generate_observations(params, obs_seed))


def _rbm(config: Mapping[str, Any], rng: np.random.Generator) -> RbmParams:
    n = int(config["n_visible"])
    m = int(config["n_hidden"])
    c = int(config.get("n_categories", 2))
    w_scale = float(config.get("weight_scale", 0.1))
    b_scale = float(config.get("bias_scale", 0.1))
    return RbmParams(
        theta_vis=rng.normal(0.0, b_scale, size=(n, c)),
        beta=rng.normal(0.0, b_scale, size=m),
        weights=rng.normal(0.0, w_scale, size=(m, n, c)),
    )


_GENERATORS: Dict[ModelFamily, Callable[[Mapping[str, Any], np.random.Generator], ModelParams]] = {
    ModelFamily.BERNOULLI: _bernoulli,
    ModelFamily.ISING: _ising,
    ModelFamily.FHMM: _fhmm,
    ModelFamily.RBM: _rbm,
}


def generate_params(family: ModelFamily, config: Mapping[str, Any], seed: int) -> ModelParams:
    """
    Draw a parameter set for a family from a shape config.

    Args:
        family: Model family
        config: Shape and regime settings (see the preset catalogue)
        seed: RNG seed

    Returns:
        Validated, immutable parameter set

    Raises:
        KeyError: If a required shape key is missing
        ValueError: If the resulting parameters are invalid
    """
    family = ModelFamily(family)
    rng = np.random.default_rng(seed)
    params = _GENERATORS[family](config, rng)
    logger.debug(
        f"Generated {family.value} params N={params.n_sites} C={params.n_categories} seed={seed}"
    )
    return params
