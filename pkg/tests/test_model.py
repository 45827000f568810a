import numpy as np
import pytest
from hypothesis import given, settings
from scipy.integrate import quad
from scipy.stats import kstest

from kschannel import (KsModel, Measurement, OntologicalModel, born_probability,
                       ks_density, ks_marginal, ks_response, ks_sample, random_unit_vec,
                       sphere_from_zphi)
from kschannel.quadrature import (born_plus_integral, density_normalization,
                                  marginal_from_prior)
from conftest import unit_vectors

ZHAT = np.array([0.0, 0.0, 1.0])


class TestKsDensity:
    def test_value_at_full_alignment(self):
        assert ks_density(ZHAT, ZHAT) == pytest.approx(1.0 / np.pi, abs=1e-15)

    def test_zero_outside_hemisphere(self):
        x = sphere_from_zphi(-0.3, 1.0)
        assert ks_density(x, ZHAT) == 0.0

    def test_value_at_half_alignment(self):
        x = sphere_from_zphi(0.5, 0.0)
        assert ks_density(x, ZHAT) == pytest.approx(1.0 / (2.0 * np.pi), abs=1e-15)

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            ks_density(2.0 * ZHAT, ZHAT)
        with pytest.raises(ValueError):
            ks_density(ZHAT, np.zeros(3))

    @settings(max_examples=200)
    @given(unit_vectors(), unit_vectors())
    def test_nonnegative_and_supported_on_hemisphere(self, x, v):
        rho = ks_density(x, v)
        assert rho >= 0.0
        if float(np.dot(x, v)) <= 0.0:
            assert rho == 0.0

    def test_normalization_by_quadrature(self):
        rng = np.random.default_rng(21)
        for v in random_unit_vec(rng, 20):
            assert density_normalization(v) == pytest.approx(1.0, abs=1e-6)


class TestKsSample:
    def test_support_is_strict(self):
        rng = np.random.default_rng(1)
        v = random_unit_vec(rng)
        x = ks_sample(v, rng, 100_000)
        assert np.min(x @ v) > 0.0

    def test_mean_height_matches_quadrature(self):
        # oracle: E[z] under the density 2z on (0, 1]
        expected, _ = quad(lambda z: z * 2.0 * z, 0.0, 1.0)
        rng = np.random.default_rng(2)
        v = random_unit_vec(rng)
        x = ks_sample(v, rng, 1_000_000)
        assert np.mean(x @ v) == pytest.approx(expected, abs=1e-3)

    def test_height_cdf_ks_test(self):
        n = 100_000
        rng = np.random.default_rng(3)
        v = random_unit_vec(rng)
        z = ks_sample(v, rng, n) @ v
        stat = kstest(z, lambda t: np.clip(t, 0.0, 1.0) ** 2).statistic
        assert stat < 1.628 / np.sqrt(n)  # 1% critical value

    @pytest.mark.parametrize("dot", [-0.5, 0.0, 0.5])
    def test_measurement_statistics_match_born(self, dot):
        rng = np.random.default_rng(40 + int(2 * dot))
        v = random_unit_vec(rng)
        m = np.asarray(sphere_from_zphi(dot, 0.0), float)
        from kschannel import rotate_to_frame
        m = rotate_to_frame(m, v)
        x = ks_sample(v, rng, 1_000_000)
        empirical = np.mean((x @ m) > 0.0)
        assert empirical == pytest.approx(born_probability(v, Measurement(m)), abs=2e-3)

    def test_deterministic_given_seed(self):
        v = sphere_from_zphi(0.3, 2.0)
        a = ks_sample(v, np.random.default_rng(5), 1000)
        b = ks_sample(v, np.random.default_rng(5), 1000)
        assert np.array_equal(a, b)


class TestKsResponse:
    def test_aligned_is_plus(self):
        assert ks_response(ZHAT, Measurement(ZHAT)) == 1

    def test_opposite_is_minus(self):
        x = sphere_from_zphi(-0.9, 0.4)
        assert ks_response(x, Measurement(ZHAT)) == -1

    def test_tie_goes_to_plus(self):
        x = np.array([1.0, 0.0, 0.0])
        assert ks_response(x, Measurement(ZHAT)) == 1

    def test_born_equivalence_by_quadrature_small_grid(self):
        for a in np.linspace(0.0, np.pi, 5):
            for b in np.linspace(0.0, np.pi, 5):
                v = sphere_from_zphi(np.cos(a), 0.0)
                m = sphere_from_zphi(np.cos(b), 0.0)
                lhs = born_plus_integral(v, m)
                rhs = born_probability(v, Measurement(m))
                assert lhs == pytest.approx(rhs, abs=1e-6)


class TestKsMarginal:
    def test_constant_value(self):
        assert ks_marginal(ZHAT) == pytest.approx(1.0 / (4.0 * np.pi), abs=1e-16)

    def test_x_independent(self):
        rng = np.random.default_rng(9)
        vals = ks_marginal(random_unit_vec(rng, 100))
        assert np.all(vals == vals[0])

    def test_integrates_to_one(self):
        assert 4.0 * np.pi * ks_marginal(ZHAT) == pytest.approx(1.0, abs=1e-12)

    def test_monte_carlo_average_of_conditional(self):
        # oracle: marginal(x) = E_v[rho(x|v)] over uniform v
        rng = np.random.default_rng(10)
        x = random_unit_vec(rng)
        v = random_unit_vec(rng, 1_000_000)
        mc = np.mean(ks_density(np.broadcast_to(x, v.shape), v))
        assert mc == pytest.approx(1.0 / (4.0 * np.pi), rel=5e-3)

    def test_equals_prior_average_by_quadrature(self):
        rng = np.random.default_rng(12)
        for x in random_unit_vec(rng, 5):
            assert marginal_from_prior(x) == pytest.approx(ks_marginal(x), abs=1e-6)


def test_ks_model_satisfies_interface():
    assert isinstance(KsModel(), OntologicalModel)


def test_ks_model_methods_delegate():
    model = KsModel()
    rng = np.random.default_rng(0)
    states = model.sample_state(10, rng)
    x = model.sample_ontic(states, rng)
    assert x.shape == (10, 3)
    assert np.all(model.conditional_density(x, states) > 0.0)
    assert np.all(model.marginal_density(x) == 1.0 / (4.0 * np.pi))
    assert set(np.unique(model.response(x, Measurement(ZHAT)))) <= {-1, 1}
