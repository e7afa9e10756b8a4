"""
Tests for weights, rate rows, transition rows and the exact oracles.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlangevin.dynamics import (
    DomainError,
    WeightFunction,
    check_rate_matrix,
    conductance_flow,
    dmala_row,
    dmala_rows,
    euler_row,
    euler_rows,
    first_jump_law,
    full_rate_matrix,
    gillespie_path,
    integrate_dwgf,
    interpolated_row,
    interpolated_rows,
    log_g,
    master_equation_flow,
    matrix_exponential,
    rate_row,
    rate_table,
    rates_from_ratios,
    stationary_rows,
)
from dlangevin.model import DenseDistribution, WeightKind
from dlangevin.sampler import ChainState, GwgSampler, SamplerConfig, SamplerKind


def random_rows(rng, n, c, weight=WeightKind.SQRT):
    current = rng.integers(0, c, n)
    log_ratios = rng.uniform(-2.0, 2.0, (n, c))
    log_ratios[np.arange(n), current] = 0.0
    return rates_from_ratios(log_ratios, current, weight), log_ratios, current


class TestWeights:
    """Locally balanced weight functions."""

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=-50.0, max_value=50.0), st.sampled_from(list(WeightKind)))
    def test_locally_balanced(self, log_t, weight):
        """log g(t) = log t + log g(1/t)."""
        assert log_g(weight, log_t) == pytest.approx(log_t + log_g(weight, -log_t), abs=1e-12)

    def test_values_at_one(self):
        """g(1) is 1 for sqrt and 1/2 for barker."""
        assert WeightFunction(kind=WeightKind.SQRT).log_g_at_one == 0.0
        assert WeightFunction(kind=WeightKind.BARKER).log_g_at_one == pytest.approx(math.log(0.5))

    def test_minus_infinity(self):
        """A zero ratio has zero weight."""
        assert log_g(WeightKind.BARKER, -math.inf) == -math.inf
        assert log_g(WeightKind.SQRT, -math.inf) == -math.inf

    def test_nan_rejected(self):
        """NaN log ratios are a domain error."""
        with pytest.raises(DomainError):
            log_g(WeightKind.SQRT, float("nan"))

    def test_array_input(self):
        """Arrays keep their shape."""
        out = log_g("sqrt", np.array([[0.0, 2.0]]))
        np.testing.assert_allclose(out, [[0.0, 1.0]])
        assert WeightFunction(kind="sqrt")(2.0) == pytest.approx(1.0)


class TestRates:
    """Rate rows and the full generator."""

    def test_rows_sum_to_zero(self, potts_model, rng):
        """Each site's rate row sums to zero with non-negative off-diagonals."""
        x = rng.integers(0, 3, potts_model.n_sites)
        rates, _ = rate_table(potts_model, x, WeightKind.BARKER)
        np.testing.assert_allclose(rates.sum(axis=1), 0.0, atol=1e-12)
        off = np.ones_like(rates, dtype=bool)
        off[np.arange(potts_model.n_sites), x] = False
        assert np.all(rates[off] > 0)

    def test_rate_row_view(self, potts_model):
        """rate_row is one row of rate_table."""
        x = np.array([0, 1, 2, 0])
        row = rate_row(potts_model, x, 2, WeightKind.SQRT)
        rates, _ = rate_table(potts_model, x, WeightKind.SQRT)
        assert row.current == 2
        np.testing.assert_allclose(row.rates, rates[2])
        assert row.exit_rate == pytest.approx(-rates[2, 2])

    def test_full_matrix_is_reversible(self, ising_model):
        """pi_x Q_xy = pi_y Q_yx and pi Q = 0."""
        for weight in WeightKind:
            full = full_rate_matrix(ising_model, weight)
            Q, pi = full.Q, full.pi.probs
            np.testing.assert_allclose(Q.sum(axis=1), 0.0, atol=1e-10)
            flux = pi[:, None] * Q
            np.testing.assert_allclose(flux, flux.T, atol=1e-12)
            np.testing.assert_allclose(pi @ Q, 0.0, atol=1e-12)

    def test_full_matrix_neighbours_only(self, ising_model):
        """Q_xy > 0 exactly for Hamming-1 neighbours."""
        full = full_rate_matrix(ising_model, WeightKind.SQRT)
        states = full.states
        distance = (states[:, None, :] != states[None, :, :]).sum(axis=2)
        off = ~np.eye(len(states), dtype=bool)
        assert np.all((full.Q[off] > 0) == (distance[off] == 1))


class TestInterpolatedRows:
    """The DLMC transition rows."""

    def test_row_stochastic(self, rng):
        """Rows are non-negative and sum to one."""
        rates, log_ratios, current = random_rows(rng, 20, 5)
        for h in (0.01, 1.0, 100.0):
            rows = interpolated_rows(rates, log_ratios, current, h)
            assert np.all(rows >= 0)
            np.testing.assert_allclose(rows.sum(axis=1), 1.0, atol=1e-12)

    def test_zero_time_is_identity(self, rng):
        """h = 0 keeps every site."""
        rates, log_ratios, current = random_rows(rng, 10, 4)
        rows = interpolated_rows(rates, log_ratios, current, 0.0)
        np.testing.assert_array_equal(rows, np.eye(4)[current])

    def test_long_time_is_stationary(self, rng):
        """h -> inf gives the per-site stationary law."""
        rates, log_ratios, current = random_rows(rng, 10, 4)
        rows = interpolated_rows(rates, log_ratios, current, 1e9)
        np.testing.assert_allclose(rows, stationary_rows(log_ratios), atol=1e-9)

    @pytest.mark.parametrize("alpha,beta", [(0.3, 2.0), (1.0, 1.0), (5.0, 0.2)])
    @pytest.mark.parametrize("h", [0.01, 0.7, 4.0])
    def test_two_categories_exact(self, alpha, beta, h):
        """For C = 2 the rows equal exp(Qh)."""
        Q = np.array([[-alpha, alpha], [beta, -beta]])
        log_ratios = np.array([[0.0, math.log(alpha / beta)], [math.log(beta / alpha), 0.0]])
        rows = interpolated_rows(Q, log_ratios, np.array([0, 1]), h)
        np.testing.assert_allclose(rows, matrix_exponential(Q, h), atol=1e-12)

    def test_negative_time(self, rng):
        """Negative simulation time is rejected."""
        rates, log_ratios, current = random_rows(rng, 2, 2)
        with pytest.raises(DomainError):
            interpolated_rows(rates, log_ratios, current, -1.0)

    def test_single_row_view(self, potts_model):
        """interpolated_row returns a validated TransitionRow."""
        x = np.array([0, 1, 2, 0])
        rate = rate_row(potts_model, x, 0, WeightKind.SQRT)
        local = potts_model.local_log_ratios(x, 0)
        row = interpolated_row(rate, local, 0, 0.5)
        assert row.current == 0
        assert row.probs.sum() == pytest.approx(1.0)
        assert row.stay_probability == pytest.approx(row.probs[0])


class TestEulerAndDmalaRows:
    """Forward Euler and DMALA rows."""

    def test_euler_small_step(self, rng):
        """Small h: I + hQ without clamping."""
        rates, _, current = random_rows(rng, 5, 3)
        rows, clamped = euler_rows(rates, current, 1e-3)
        assert not clamped.any()
        np.testing.assert_allclose(rows, np.eye(3)[current] + 1e-3 * rates, atol=1e-14)

    def test_euler_clamps_large_step(self, rng):
        """A negative diagonal is clamped and the row renormalised."""
        rates, _, current = random_rows(rng, 5, 3)
        rows, clamped = euler_rows(rates, current, 100.0)
        assert clamped.all()
        assert np.all(rows[np.arange(5), current] == 0.0)
        np.testing.assert_allclose(rows.sum(axis=1), 1.0)

    def test_euler_row_flag(self, potts_model):
        """The single-row view reports clamping."""
        x = np.array([0, 1, 2, 0])
        row = euler_row(rate_row(potts_model, x, 1, WeightKind.SQRT), 1, 50.0)
        assert row.clamped

    def test_dmala_rows(self, rng):
        """Rows sum to one; alpha must be positive."""
        _, log_ratios, current = random_rows(rng, 6, 4)
        rows = dmala_rows(log_ratios, current, 0.5)
        np.testing.assert_allclose(rows.sum(axis=1), 1.0)
        with pytest.raises(DomainError):
            dmala_rows(log_ratios, current, 0.0)

    def test_dmala_row_view(self, potts_model):
        """dmala_row is one row of dmala_rows."""
        x = np.array([0, 1, 2, 0])
        local = potts_model.local_log_ratios(x, 2)
        row = dmala_row(local, 2, 0.5)
        expected = dmala_rows(local.log_ratios[None, :], np.array([2]), 0.5)[0]
        np.testing.assert_allclose(row.probs, expected)
        assert row.current == 2

    def test_euler_matches_dmala_shape(self, rng):
        """With h = exp(-1/(2 alpha)) the off-diagonals are proportional."""
        _, log_ratios, current = random_rows(rng, 6, 4)
        alpha = 0.4
        rates = rates_from_ratios(log_ratios, current, WeightKind.SQRT)
        euler, _ = euler_rows(rates, current, math.exp(-1.0 / (2 * alpha)))
        dmala = dmala_rows(log_ratios, current, alpha)
        off = np.ones_like(euler, dtype=bool)
        off[np.arange(6), current] = False
        ratio = (euler[off] / dmala[off]).reshape(6, 3)
        np.testing.assert_allclose(ratio, ratio[:, :1] * np.ones((1, 3)), rtol=1e-12)
        assert np.all(euler[np.arange(6), current] <= dmala[np.arange(6), current])


class TestMatrixExponential:
    """Oracle transition matrices."""

    def test_stochastic(self, rng):
        """exp(Qh) is row-stochastic."""
        Q = rng.uniform(0, 1, (4, 4))
        np.fill_diagonal(Q, 0.0)
        np.fill_diagonal(Q, -Q.sum(axis=1))
        P = matrix_exponential(Q, 2.0)
        np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(P >= 0)
        np.testing.assert_array_equal(matrix_exponential(Q, 0.0), np.eye(4))

    def test_rejects_non_generators(self):
        """Rows must sum to zero and off-diagonals be non-negative."""
        with pytest.raises(DomainError):
            check_rate_matrix(np.array([[-1.0, 0.5], [1.0, -1.0]]))
        with pytest.raises(DomainError):
            check_rate_matrix(np.array([[1.0, -1.0], [1.0, -1.0]]))
        with pytest.raises(DomainError):
            matrix_exponential(np.zeros((2, 2)), -1.0)


class TestGradientFlow:
    """Forward equation and its conductance form."""

    def test_kl_descends(self, ising_model, rng):
        """KL(rho_t || pi) is non-increasing and decays."""
        full = full_rate_matrix(ising_model, WeightKind.SQRT)
        rho0 = DenseDistribution(probs=rng.dirichlet(np.ones(16)))
        trajectory = integrate_dwgf(full, rho0, t_end=20.0, record_every=10)
        kl = trajectory.kl
        assert trajectory.times[-1] == pytest.approx(20.0)
        assert np.all(np.diff(kl) <= 1e-12)
        assert kl[-1] < 1e-2 * kl[0]

    @pytest.mark.parametrize("weight", list(WeightKind))
    @pytest.mark.parametrize("model_name", ["ising_model", "potts_model"])
    def test_point_mass_converges(self, model_name, weight, request):
        """From a point mass on the least likely state KL never rises and is below 1e-8 at t = 50."""
        full = full_rate_matrix(request.getfixturevalue(model_name), weight)
        size = full.Q.shape[0]
        rho0 = DenseDistribution(probs=np.eye(size)[int(np.argmin(full.pi.probs))])
        kl = integrate_dwgf(full, rho0, t_end=50.0).kl
        assert kl[0] == pytest.approx(-math.log(full.pi.probs.min()))
        assert np.all(np.diff(kl) <= 1e-12)
        assert kl[-1] < 1e-8

    def test_zero_horizon(self, ising_model):
        """t_end = 0 records only the start."""
        full = full_rate_matrix(ising_model, WeightKind.SQRT)
        trajectory = integrate_dwgf(full, full.pi, t_end=0.0)
        assert len(trajectory.points) == 1
        assert trajectory.final.kl == pytest.approx(0.0, abs=1e-15)

    def test_bad_step(self, ising_model):
        """dt must be positive."""
        full = full_rate_matrix(ising_model, WeightKind.SQRT)
        with pytest.raises(DomainError):
            integrate_dwgf(full, full.pi, t_end=1.0, dt=0.0)

    def test_conductance_equals_master_equation(self, rng):
        """Both forms give the same tangent vector."""
        for weight in WeightKind:
            rho = rng.dirichlet(np.ones(8))
            pi = rng.dirichlet(np.ones(8))
            a = conductance_flow(rho, pi, -np.log(pi), weight)
            b = master_equation_flow(rho, pi, weight)
            np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-14)
            assert a.sum() == pytest.approx(0.0, abs=1e-12)

    def test_conductance_at_equilibrium(self, rng):
        """rho = pi is a fixed point."""
        pi = rng.dirichlet(np.ones(6))
        flow = conductance_flow(pi, pi, -np.log(pi), WeightKind.SQRT)
        np.testing.assert_allclose(flow, 0.0, atol=1e-14)

    def test_conductance_rejects_zero_mass(self):
        """Zero probabilities are outside the domain."""
        with pytest.raises(DomainError):
            conductance_flow(np.array([1.0, 0.0]), np.array([0.5, 0.5]), np.zeros(2), "sqrt")

    def test_master_equation_matches_generator(self, ising_model, rng):
        """On the lattice graph the simplified flow is rho Q."""
        full = full_rate_matrix(ising_model, WeightKind.BARKER)
        states = full.states
        adjacency = ((states[:, None, :] != states[None, :, :]).sum(axis=2) == 1).astype(float)
        rho = rng.dirichlet(np.ones(16))
        flow = master_equation_flow(rho, full.pi.probs, WeightKind.BARKER, adjacency)
        np.testing.assert_allclose(flow, rho @ full.Q, atol=1e-12)


class TestGillespie:
    """Exact jump-process simulation."""

    def test_first_jump_law_matches_gwg(self, potts_model):
        """The first-jump law is the GWG proposal."""
        x = np.array([0, 1, 2, 1])
        law = first_jump_law(potts_model, x, WeightKind.SQRT)
        assert law.sum() == pytest.approx(1.0)
        assert np.all(law[np.arange(4), x] == 0.0)
        gwg = GwgSampler(SamplerConfig(kind=SamplerKind.GWG))
        chain = ChainState.start(potts_model, x, np.random.default_rng(0))
        np.testing.assert_allclose(np.exp(gwg.jump_log_probs(potts_model, x, chain)), law, atol=1e-12)

    def test_path_structure(self, potts_model, rng):
        """Times increase and each jump changes exactly one site."""
        path = gillespie_path(potts_model, np.zeros(4, dtype=np.int64), 5.0, WeightKind.SQRT, rng)
        assert path.times[0] == 0.0
        assert np.all(np.diff(path.times) > 0)
        assert path.times[-1] <= 5.0
        for a, b in zip(path.states[:-1], path.states[1:]):
            assert (a != b).sum() == 1
        assert path.n_jumps == len(path.times) - 1

    def test_max_jumps(self, potts_model, rng):
        """The jump cap stops the path."""
        path = gillespie_path(
            potts_model, np.zeros(4, dtype=np.int64), 1e6, WeightKind.SQRT, rng, max_jumps=3
        )
        assert path.n_jumps == 3
        np.testing.assert_array_equal(path.state_at(0.0), np.zeros(4))

    def test_bad_horizon(self, potts_model, rng):
        """t_end must be positive."""
        with pytest.raises(DomainError):
            gillespie_path(potts_model, np.zeros(4, dtype=np.int64), 0.0, "sqrt", rng)

    def test_empirical_first_jumps(self, bernoulli_model):
        """Simulated first jumps follow the exact law."""
        rng = np.random.default_rng(8)
        x = np.array([0, 1, 2])
        law = first_jump_law(bernoulli_model, x, WeightKind.SQRT)
        counts = np.zeros_like(law)
        for _ in range(4000):
            path = gillespie_path(bernoulli_model, x, 1e9, WeightKind.SQRT, rng, max_jumps=1)
            moved = int(np.flatnonzero(path.states[1] != x)[0])
            counts[moved, path.states[1][moved]] += 1
        assert 0.5 * np.abs(counts / 4000 - law).sum() < 0.05
