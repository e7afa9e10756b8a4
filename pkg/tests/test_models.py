"""
Tests for the energy models, enumeration and presets.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError
from scipy.special import logsumexp

from dlangevin.loader import ExperimentConfig
from dlangevin.model import (
    DEFAULT_ENUMERATION_CAP,
    BernoulliModel,
    CapacityError,
    DenseDistribution,
    EvalCounter,
    IsingPottsParams,
    ModelFamily,
    Scale,
    ShapeError,
    SiteIndexError,
    State,
    build_model,
    enumerate_states,
    fhmm_generate_observations,
    generate_params,
    index_state,
    inner_mask,
    list_presets,
    preset_document,
    preset_family,
    preset_shape,
    square_lattice_edges,
    state_index,
)


def brute_force_ratios(model, x):
    """log pi(y) - log pi(x) for every single-site change, from energies."""
    base = model.energy(x)
    table = np.zeros((model.n_sites, model.n_categories))
    for n in range(model.n_sites):
        for j in range(model.n_categories):
            y = x.copy()
            y[n] = j
            table[n, j] = base - model.energy(y)
    return table


class TestEnergyModels:
    """Behaviour shared by every family."""

    def test_ratio_table_matches_energies(self, any_model, rng):
        """all_log_ratios equals energy differences of single-site changes."""
        for _ in range(5):
            x = rng.integers(0, any_model.n_categories, any_model.n_sites)
            np.testing.assert_allclose(
                any_model.all_log_ratios(x), brute_force_ratios(any_model, x), atol=1e-10
            )

    def test_current_entries_are_zero(self, any_model, rng):
        """The entry at the current category is exactly zero."""
        x = rng.integers(0, any_model.n_categories, any_model.n_sites)
        table = any_model.all_log_ratios(x)
        assert np.all(table[np.arange(any_model.n_sites), x] == 0.0)

    def test_local_ratios_slice(self, any_model, rng):
        """local_log_ratios is one row of the full table."""
        x = rng.integers(0, any_model.n_categories, any_model.n_sites)
        local = any_model.local_log_ratios(x, 1)
        assert local.site == 1
        assert local.current == int(x[1])
        np.testing.assert_array_equal(local.log_ratios, any_model.all_log_ratios(x)[1])

    def test_enumeration_is_normalised(self, any_model):
        """Enumerated target sums to one and follows exp(-f)."""
        dist = any_model.enumerate_distribution()
        assert dist.size == any_model.space_size
        assert dist.probs.sum() == pytest.approx(1.0, abs=1e-12)
        states = enumerate_states(any_model.n_sites, any_model.n_categories)
        f0, f1 = any_model.energy(states[0]), any_model.energy(states[-1])
        assert np.log(dist.probs[0] / dist.probs[-1]) == pytest.approx(f1 - f0, abs=1e-9)

    def test_batched_energies(self, any_model, rng):
        """energies() agrees with energy() row by row."""
        X = rng.integers(0, any_model.n_categories, (6, any_model.n_sites))
        expected = [any_model.energy(x) for x in X]
        np.testing.assert_allclose(any_model.energies(X), expected, atol=1e-12)


class TestEvaluationCounting:
    """Energy calls, sweeps and gradients each count once."""

    def test_counter_increments(self, ising_model):
        """One energy, one sweep, one gradient and a batch of four."""
        counter = EvalCounter()
        x = np.zeros(ising_model.n_sites, dtype=np.int64)
        ising_model.energy(x, counter)
        ising_model.all_log_ratios(x, counter)
        ising_model.grad_log_ratios(x, counter)
        assert counter.count == 3
        ising_model.energies(np.zeros((4, ising_model.n_sites), dtype=np.int64), counter)
        assert counter.count == 7

    def test_no_counter_is_allowed(self, ising_model):
        """Calls without a counter do not fail."""
        assert isinstance(ising_model.energy(np.zeros(4, dtype=np.int64)), float)


class TestStateValidation:
    """Shape and range checks on states."""

    def test_wrong_length(self, ising_model):
        """A state of the wrong length is rejected."""
        with pytest.raises(ShapeError):
            ising_model.energy(np.zeros(5, dtype=np.int64))

    def test_out_of_range(self, ising_model):
        """Categories outside [0, C) are rejected."""
        with pytest.raises(ShapeError):
            ising_model.energy(np.array([0, 1, 2, 0]))

    def test_float_state(self, ising_model):
        """Float vectors are not states."""
        with pytest.raises(ShapeError):
            ising_model.energy(np.zeros(4))

    def test_bad_site(self, ising_model):
        """local_log_ratios checks the site index."""
        with pytest.raises(SiteIndexError):
            ising_model.local_log_ratios(np.zeros(4, dtype=np.int64), 4)

    def test_state_record(self, ising_model):
        """State records validate their range and are accepted by models."""
        state = State(values=[0, 1, 1, 0], n_categories=2)
        assert state.dimension == 4
        assert isinstance(ising_model.energy(state), float)
        with pytest.raises(ValidationError):
            State(values=[0, 2], n_categories=2)

    def test_state_category_mismatch(self, ising_model):
        """A State with another C is rejected."""
        with pytest.raises(ShapeError):
            ising_model.energy(State(values=[0, 1, 1, 0], n_categories=3))


class TestEnumeration:
    """Row-major indexing and capacity limits."""

    def test_index_roundtrip(self):
        """state_index inverts index_state."""
        states = enumerate_states(3, 3)
        np.testing.assert_array_equal(state_index(states, 3), np.arange(27))
        np.testing.assert_array_equal(index_state(5, 3, 3), states[5])

    def test_first_site_most_significant(self):
        """Site 0 is the leading digit."""
        states = enumerate_states(2, 2)
        np.testing.assert_array_equal(states, [[0, 0], [0, 1], [1, 0], [1, 1]])

    def test_capacity(self):
        """Enumeration refuses spaces beyond the cap."""
        params = generate_params(ModelFamily.BERNOULLI, {"n_sites": 17, "n_categories": 2}, 0)
        model = build_model(params)
        assert model.space_size > DEFAULT_ENUMERATION_CAP
        with pytest.raises(CapacityError):
            model.enumerate_distribution()

    def test_distribution_must_sum_to_one(self):
        """DenseDistribution rejects unnormalised vectors."""
        with pytest.raises(ValidationError):
            DenseDistribution(probs=[0.5, 0.6])

    def test_marginals(self, bernoulli_model):
        """Enumerated marginals of a Bernoulli model equal the closed form."""
        assert isinstance(bernoulli_model, BernoulliModel)
        dist = bernoulli_model.enumerate_distribution()
        np.testing.assert_allclose(
            dist.marginals(), bernoulli_model.exact_marginals(), atol=1e-12
        )


class TestGradientRatios:
    """First-order ratio estimates."""

    def test_exact_for_linear_models(self, bernoulli_model, ising_model, potts_model, rng):
        """Single-site moves are linear in the embedding for these families."""
        for model in (bernoulli_model, ising_model, potts_model):
            x = rng.integers(0, model.n_categories, model.n_sites)
            np.testing.assert_allclose(
                model.grad_log_ratios(x), model.all_log_ratios(x), atol=1e-10
            )

    def test_gradient_current_entries(self, rbm_model, rng):
        """Gradient estimates are zero at the current category."""
        x = rng.integers(0, rbm_model.n_categories, rbm_model.n_sites)
        table = rbm_model.grad_log_ratios(x)
        np.testing.assert_allclose(table[np.arange(rbm_model.n_sites), x], 0.0)


class TestIsingParams:
    """Lattice parameters."""

    def test_edges(self):
        """Open lattice of side L has 2 L (L - 1) edges."""
        assert square_lattice_edges(4).shape == (24, 2)
        assert square_lattice_edges(1).shape == (0, 2)

    def test_lambda_alias(self):
        """Coupling is given as 'lambda' and edges are filled in."""
        params = IsingPottsParams.model_validate(
            {"side": 2, "theta": np.zeros((4, 2)), "lambda": 0.7}
        )
        assert params.lam == 0.7
        assert params.edges.shape == (4, 2)
        assert params.n_sites == 4

    def test_params_are_read_only(self, ising_model):
        """Parameter arrays cannot be written."""
        with pytest.raises(ValueError):
            ising_model.params.theta[0, 0] = 1.0

    def test_inner_mask(self):
        """Inner square of side L - 2 ceil(L / 4)."""
        mask = inner_mask(8)
        assert mask.sum() == 16
        assert not mask[0].any()
        assert inner_mask(2).sum() == 0


class TestParameterGeneration:
    """Seeded parameter draws."""

    def test_deterministic(self):
        """Same family, shape and seed give identical arrays."""
        shape = {"n_visible": 5, "n_hidden": 2}
        a = generate_params(ModelFamily.RBM, shape, 9)
        b = generate_params(ModelFamily.RBM, shape, 9)
        c = generate_params(ModelFamily.RBM, shape, 10)
        np.testing.assert_array_equal(a.weights, b.weights)
        assert not np.array_equal(a.weights, c.weights)

    def test_missing_shape_key(self):
        """A missing required key is a KeyError."""
        with pytest.raises(KeyError):
            generate_params(ModelFamily.ISING, {"lambda": 1.0}, 0)

    def test_fhmm_sites(self, fhmm_model):
        """FHMM has length x factors sites."""
        assert fhmm_model.n_sites == 6

    def test_fhmm_observations(self, fhmm_model):
        """Observations are seeded and have one value per time step."""
        params = fhmm_model.params
        a = fhmm_generate_observations(params, 3)
        b = fhmm_generate_observations(params, 3)
        c = fhmm_generate_observations(params, 4)
        assert a.shape == (params.length,)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)


class TestPresets:
    """Preset catalogue."""

    def test_catalogue(self):
        """All sixteen regimes are present."""
        names = list_presets()
        assert len(names) == 16
        assert {"ising-high", "potts-c8", "fhmm-low", "rbm-c4"} <= set(names)
        assert preset_family("potts-c4") is ModelFamily.ISING

    def test_unknown_preset(self):
        """Unknown names raise KeyError."""
        with pytest.raises(KeyError):
            preset_shape("ising-medium")

    def test_scales(self):
        """Desk scale shrinks the lattice."""
        assert preset_shape("ising-high", Scale.PAPER)["side"] == 50
        assert preset_shape("ising-high", Scale.DESK)["side"] == 16

    @pytest.mark.parametrize("name", list_presets())
    def test_documents_validate(self, name):
        """Every preset document is a valid experiment config."""
        config = ExperimentConfig.model_validate(preset_document(name, seed=3))
        assert config.model.preset == name
        assert config.seed == 3
        assert config.burn_in < config.steps

    @pytest.mark.parametrize("name", list_presets())
    def test_desk_shapes_generate(self, name):
        """Every desk shape yields a model."""
        model = build_model(generate_params(preset_family(name), preset_shape(name), 0))
        assert model.n_sites >= 1
        assert model.n_categories in (2, 4, 8)


class TestRatioProperty:
    """Randomised local-ratio oracle."""

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(0, 2), min_size=4, max_size=4), st.integers(0, 3))
    def test_potts_ratios(self, values, site):
        """Each table entry matches the energy difference it stands for."""
        params = generate_params(
            ModelFamily.ISING, {"side": 2, "n_categories": 3, "lambda": 0.8}, seed=11
        )
        model = build_model(params)
        x = np.array(values, dtype=np.int64)
        table = model.all_log_ratios(x)
        for j in range(3):
            y = x.copy()
            y[site] = j
            assert table[site, j] == pytest.approx(model.energy(x) - model.energy(y), abs=1e-10)


def rbm_relaxed_energy(params, z):
    """Free energy at a real-valued N x C embedding."""
    act = np.einsum("mnc,nc->m", params.weights, z) + params.beta
    return -(params.theta_vis * z).sum() - np.logaddexp(0.0, act).sum()


class TestFamilyEnergies:
    """Energies and gradients against independent brute-force forms."""

    def test_rbm_free_energy_sums_out_hiddens(self):
        """The RBM energy is -log of the joint summed over binary hidden units."""
        params = generate_params(
            ModelFamily.RBM, {"n_visible": 3, "n_hidden": 2, "n_categories": 2}, seed=11
        )
        model = build_model(params)
        states = enumerate_states(3, 2)
        hiddens = enumerate_states(2, 2).astype(float)
        expected = []
        for v in states:
            unary = params.theta_vis[np.arange(3), v].sum()
            act = params.weights[:, np.arange(3), v].sum(axis=1) + params.beta
            expected.append(-logsumexp(unary + hiddens @ act))
        np.testing.assert_allclose(model.energies(states), expected, atol=1e-12)

    def test_rbm_gradient_ratios_match_finite_differences(self, rbm_model, rng):
        """grad_log_ratios uses the gradient of the relaxed free energy."""
        params = rbm_model.params
        eps = 1e-5
        for _ in range(3):
            x = rng.integers(0, rbm_model.n_categories, rbm_model.n_sites)
            z = rbm_model.one_hot(x)
            grad = np.zeros_like(z)
            for n in range(z.shape[0]):
                for c in range(z.shape[1]):
                    step = np.zeros_like(z)
                    step[n, c] = eps
                    grad[n, c] = (
                        rbm_relaxed_energy(params, z + step)
                        - rbm_relaxed_energy(params, z - step)
                    ) / (2 * eps)
            neg = -grad
            expected = neg - neg[np.arange(rbm_model.n_sites), x][:, None]
            np.testing.assert_allclose(rbm_model.grad_log_ratios(x), expected, atol=1e-7)

    def test_fhmm_energy_differences(self, fhmm_model):
        """Energy differences equal those of -log p(x) - log p(y | x)."""
        p = fhmm_model.params
        init = np.exp(p.init_logits) / np.exp(p.init_logits).sum(axis=-1, keepdims=True)
        trans = np.exp(p.transition_logits)
        trans = trans / trans.sum(axis=-1, keepdims=True)

        def neg_log_joint(x):
            z = x.reshape(p.length, p.factors)
            total = 0.0
            for k in range(p.factors):
                total += np.log(init[k, z[0, k]])
                for t in range(1, p.length):
                    total += np.log(trans[k, z[t - 1, k], z[t, k]])
            for t in range(p.length):
                mean = sum(p.W[k, z[t, k]] for k in range(p.factors)) + p.b
                resid = p.observations[t] - mean
                total += -0.5 * np.log(2 * np.pi * p.sigma ** 2) - resid ** 2 / (2 * p.sigma ** 2)
            return -total

        states = enumerate_states(fhmm_model.n_sites, fhmm_model.n_categories)
        brute = np.array([neg_log_joint(x) for x in states])
        energies = fhmm_model.energies(states)
        np.testing.assert_allclose(energies - energies[0], brute - brute[0], atol=1e-9)

    def test_argmax_state_has_lowest_energy(self, any_model):
        """The most probable enumerated state is a minimum-energy state."""
        states = enumerate_states(any_model.n_sites, any_model.n_categories)
        lowest = any_model.energies(states).min()
        best = any_model.enumerate_distribution().argmax_state()
        assert any_model.energy(best) == pytest.approx(lowest, abs=1e-10)

    def test_fhmm_observation_mean(self):
        """With L = K = 1, y averages to the emission mixture mean."""
        params = generate_params(ModelFamily.FHMM, {"length": 1, "factors": 1}, seed=6)
        probs = np.exp(params.init_logits[0]) / np.exp(params.init_logits[0]).sum()
        mean = float(probs @ params.W[0]) + params.b
        sd = np.sqrt(params.sigma ** 2 + float(probs @ (params.W[0] - mean + params.b) ** 2))
        n = 4000
        draws = np.array([fhmm_generate_observations(params, s)[0] for s in range(n)])
        assert abs(draws.mean() - mean) < 5 * sd / np.sqrt(n)
