"""
Shared fixtures: tiny enumerable models and seeded generators.
"""

import logging

import numpy as np
import pytest

from dlangevin.model import ModelFamily, build_model, generate_params

logging.getLogger("dlangevin").setLevel(logging.WARNING)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def bernoulli_model():
    """N=3, C=3 independent sites."""
    params = generate_params(
        ModelFamily.BERNOULLI, {"n_sites": 3, "n_categories": 3, "sigma2": 1.0}, seed=1
    )
    return build_model(params)


@pytest.fixture
def ising_model():
    """2x2 binary lattice."""
    params = generate_params(ModelFamily.ISING, {"side": 2, "lambda": 0.5}, seed=2)
    return build_model(params)


@pytest.fixture
def potts_model():
    """2x2 lattice with three categories."""
    params = generate_params(
        ModelFamily.ISING, {"side": 2, "n_categories": 3, "lambda": 0.5}, seed=3
    )
    return build_model(params)


@pytest.fixture
def fhmm_model():
    """Length 3, two binary factors."""
    params = generate_params(
        ModelFamily.FHMM, {"length": 3, "factors": 2, "n_categories": 2}, seed=4
    )
    return build_model(params)


@pytest.fixture
def rbm_model():
    """Four ternary visibles, three hiddens."""
    params = generate_params(
        ModelFamily.RBM,
        {"n_visible": 4, "n_hidden": 3, "n_categories": 3, "weight_scale": 0.5},
        seed=5,
    )
    return build_model(params)


MODEL_FIXTURES = ["bernoulli_model", "ising_model", "potts_model", "fhmm_model", "rbm_model"]


@pytest.fixture(params=MODEL_FIXTURES)
def any_model(request):
    return request.getfixturevalue(request.param)


@pytest.fixture
def smoke_config():
    """Two chains of three samplers on a 4-site Bernoulli model."""
    return {
        "model": {
            "family": "bernoulli",
            "preset": "bernoulli-high",
            "overrides": {"n_sites": 4},
        },
        "samplers": [
            {"kind": "dlmc", "weight": "sqrt", "step": 1.0},
            {"kind": "rwm", "flips": 1},
            {"kind": "gwg", "weight": "barker"},
        ],
        "chains": 2,
        "steps": 100,
        "burn_in": 10,
        "seed": 42,
    }
