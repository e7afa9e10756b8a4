"""
Sampler registry and one-step entry points.
"""

from typing import Dict, Optional, Type
import logging

from ..model.base import EnergyModel
from ..model.types import SamplerKind
from .base import BaseSampler, ChainState, SamplerConfig, SamplerConfigError
from .classical import BlockGibbsSampler, HammingBallSampler, RwmSampler
from .factorized import DlmcfSampler, DlmcSampler, DmalaSampler
from .locally_balanced import GwgSampler, PasSampler

SAMPLER_REGISTRY: Dict[SamplerKind, Type[BaseSampler]] = {
    SamplerKind.RWM: RwmSampler,
    SamplerKind.BLOCK_GIBBS: BlockGibbsSampler,
    SamplerKind.HAMMING_BALL: HammingBallSampler,
    SamplerKind.GWG: GwgSampler,
    SamplerKind.PAS: PasSampler,
    SamplerKind.DMALA: DmalaSampler,
    SamplerKind.DLMCF: DlmcfSampler,
    SamplerKind.DLMC: DlmcSampler,
}


def build_sampler(config: SamplerConfig, logger: Optional[logging.Logger] = None) -> BaseSampler:
    """
    Instantiate the kernel for a config.

    Raises:
        SamplerConfigError: If no kernel is registered for the kind
    """
    try:
        cls = SAMPLER_REGISTRY[config.kind]
    except KeyError:
        raise SamplerConfigError(f"No sampler registered for kind: {config.kind}")
    return cls(config, logger=logger)


def _step(kind: SamplerKind, chain: ChainState, model: EnergyModel, config: SamplerConfig) -> ChainState:
    if config.kind is not kind:
        raise SamplerConfigError(f"Expected a {kind.value} config, got {config.kind.value}")
    sampler = build_sampler(config)
    sampler.check_model(model)
    return sampler.step(chain, model)


def step_dlmc(chain: ChainState, model: EnergyModel, config: SamplerConfig) -> ChainState:
    return _step(SamplerKind.DLMC, chain, model, config)


def step_dlmcf(chain: ChainState, model: EnergyModel, config: SamplerConfig) -> ChainState:
    return _step(SamplerKind.DLMCF, chain, model, config)


def step_dmala(chain: ChainState, model: EnergyModel, config: SamplerConfig) -> ChainState:
    return _step(SamplerKind.DMALA, chain, model, config)


def step_gwg(chain: ChainState, model: EnergyModel, config: SamplerConfig) -> ChainState:
    return _step(SamplerKind.GWG, chain, model, config)


def step_pas(chain: ChainState, model: EnergyModel, config: SamplerConfig) -> ChainState:
    return _step(SamplerKind.PAS, chain, model, config)


def step_rwm(chain: ChainState, model: EnergyModel, config: SamplerConfig) -> ChainState:
    return _step(SamplerKind.RWM, chain, model, config)


def step_block_gibbs(chain: ChainState, model: EnergyModel, config: SamplerConfig) -> ChainState:
    return _step(SamplerKind.BLOCK_GIBBS, chain, model, config)


def step_hamming_ball(chain: ChainState, model: EnergyModel, config: SamplerConfig) -> ChainState:
    return _step(SamplerKind.HAMMING_BALL, chain, model, config)
