"""
Sampler Module

MCMC kernels (RWM, block Gibbs, Hamming ball, GWG, PAS, DMALA, DLMCf,
DLMC) sharing one propose / accept template, plus the chain driver and the
acceptance-rate tuner.
"""

from .base import (
    BLOCK_KINDS,
    FLIP_KINDS,
    LOCALLY_BALANCED,
    STEP_KINDS,
    BaseSampler,
    ChainState,
    Proposal,
    RunRecord,
    SamplerConfig,
    SamplerConfigError,
    SamplerException,
    TuningError,
    chain_rng,
    check_block_capacity,
    mh_accept,
    sample_rows,
    splitmix64,
    stream_id,
)
from ..model.types import SamplerKind
from .factorized import DlmcfSampler, DlmcSampler, DmalaSampler, FactorizedSampler
from .locally_balanced import GwgSampler, JumpSampler, PasSampler
from .classical import BlockGibbsSampler, HammingBallSampler, RwmSampler
from .registry import (
    SAMPLER_REGISTRY,
    build_sampler,
    step_block_gibbs,
    step_dlmc,
    step_dlmcf,
    step_dmala,
    step_gwg,
    step_hamming_ball,
    step_pas,
    step_rwm,
)
from .chain import run_chain
from .tuner import TRAILING_WINDOW, TuningReport, skipped, tune

__all__ = [
    # Base
    "BaseSampler",
    "SamplerConfig",
    "SamplerKind",
    "ChainState",
    "Proposal",
    "RunRecord",
    "mh_accept",
    "sample_rows",
    "check_block_capacity",
    "STEP_KINDS",
    "FLIP_KINDS",
    "BLOCK_KINDS",
    "LOCALLY_BALANCED",
    # Seeds
    "splitmix64",
    "stream_id",
    "chain_rng",
    # Exceptions
    "SamplerException",
    "SamplerConfigError",
    "TuningError",
    # Kernels
    "FactorizedSampler",
    "DlmcSampler",
    "DlmcfSampler",
    "DmalaSampler",
    "JumpSampler",
    "GwgSampler",
    "PasSampler",
    "RwmSampler",
    "BlockGibbsSampler",
    "HammingBallSampler",
    # Registry and steps
    "SAMPLER_REGISTRY",
    "build_sampler",
    "step_dlmc",
    "step_dlmcf",
    "step_dmala",
    "step_gwg",
    "step_pas",
    "step_rwm",
    "step_block_gibbs",
    "step_hamming_ball",
    # Running and tuning
    "run_chain",
    "tune",
    "skipped",
    "TuningReport",
    "TRAILING_WINDOW",
]
