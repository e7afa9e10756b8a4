"""
Discrete Langevin Toolkit

Discrete Langevin samplers (GWG, PAS, DMALA, DLMCf, DLMC) and classical
baselines on categorical energy models, with exact small-scale oracles for
the underlying jump dynamics and a benchmark harness.
"""

__version__ = "0.1.0"
__author__ = "Discrete Langevin Team"

from . import model
from . import dynamics
from . import sampler
from . import diagnostics
from . import loader
from . import generator
from . import service

__all__ = [
    "model",
    "dynamics",
    "sampler",
    "diagnostics",
    "loader",
    "generator",
    "service",
]
