"""Tests for the simulation distributions on [0, 1]."""

import math

import numpy as np
import pytest
import scipy.special as sp
import scipy.stats
from numpy.testing import assert_allclose

from nextgain.distributions import Beta, TruncNormal, Uniform01, parse_dist


class TestUniform01:
    def test_label(self):
        assert Uniform01().label == "uniform"

    def test_cdf_grid_is_clipped_identity(self):
        x = np.array([-0.5, 0.0, 0.25, 1.0, 1.7])
        assert_allclose(Uniform01().cdf_grid(x), [0.0, 0.0, 0.25, 1.0, 1.0])

    def test_sample_range_and_mean(self):
        rng = np.random.default_rng(21)
        draws = Uniform01().sample(rng, 20000)
        assert draws.shape == (20000,)
        assert np.all((draws >= 0.0) & (draws < 1.0))
        assert abs(float(np.mean(draws)) - 0.5) < 4.0 * 0.2887 / math.sqrt(20000)


class TestBeta:
    def test_label(self):
        assert Beta(2, 5).label == "beta:2,5"
        assert Beta(0.5, 1.25).label == "beta:0.5,1.25"

    def test_cdf_against_scipy(self):
        x = np.linspace(0.0, 1.0, 101)
        for a, b in [(2.0, 5.0), (0.5, 0.5), (7.0, 1.0)]:
            got = Beta(a, b).cdf_grid(x)
            assert_allclose(got, sp.betainc(a, b, x), atol=1e-12)

    def test_sample_moments(self):
        rng = np.random.default_rng(22)
        draws = Beta(2, 5).sample(rng, 50000)
        assert np.all((draws > 0.0) & (draws < 1.0))
        mean, var = 2.0 / 7.0, 2.0 * 5.0 / (49.0 * 8.0)
        assert abs(float(np.mean(draws)) - mean) < 4.0 * math.sqrt(var / 50000)

    def test_validation(self):
        with pytest.raises(ValueError):
            Beta(0.0, 1.0)
        with pytest.raises(ValueError):
            Beta(1.0, -2.0)


class TestTruncNormal:
    def test_label(self):
        assert TruncNormal(0.5, 0.15).label == "truncnormal:0.5,0.15"

    def test_cdf_against_scipy(self):
        x = np.linspace(0.0, 1.0, 101)
        for mu, sigma in [(0.5, 0.15), (0.2, 0.4), (0.9, 0.05), (-0.3, 0.5)]:
            a, b = (0.0 - mu) / sigma, (1.0 - mu) / sigma
            ref = scipy.stats.truncnorm.cdf(x, a, b, loc=mu, scale=sigma)
            assert_allclose(TruncNormal(mu, sigma).cdf_grid(x), ref, atol=1e-12)

    def test_cdf_edges(self):
        d = TruncNormal(0.5, 0.15)
        got = d.cdf_grid(np.array([-1.0, 0.0, 1.0, 2.0]))
        assert_allclose(got, [0.0, 0.0, 1.0, 1.0], atol=1e-14)

    def test_sample_within_domain_and_mean(self):
        rng = np.random.default_rng(23)
        d = TruncNormal(0.5, 0.15)
        draws = d.sample(rng, 30000)
        assert np.all((draws >= 0.0) & (draws <= 1.0))
        # Symmetric truncation about mu=0.5 keeps the mean at 0.5.
        assert abs(float(np.mean(draws)) - 0.5) < 4.0 * 0.15 / math.sqrt(30000)

    def test_sample_low_acceptance_terminates(self):
        rng = np.random.default_rng(24)
        d = TruncNormal(3.0, 1.0)  # ~ 2% of mass in [0, 1]
        draws = d.sample(rng, 500)
        assert draws.shape == (500,)
        assert np.all((draws >= 0.0) & (draws <= 1.0))

    def test_validation(self):
        with pytest.raises(ValueError):
            TruncNormal(0.5, 0.0)
        with pytest.raises(ValueError):
            TruncNormal(0.5, -1.0)
        with pytest.raises(ValueError, match="degenerate"):
            TruncNormal(50.0, 0.1)


class TestParseDist:
    def test_round_trips(self):
        for text in ("uniform", "beta:2,5", "beta:0.5,1.25", "truncnormal:0.5,0.15"):
            assert parse_dist(text).label == text

    def test_whitespace_and_case(self):
        assert parse_dist("  Uniform ").label == "uniform"
        assert parse_dist("BETA:2,5").label == "beta:2,5"

    def test_negative_mu_allowed(self):
        d = parse_dist("truncnormal:-0.2,0.5")
        assert isinstance(d, TruncNormal)
        assert d.mu == -0.2

    def test_errors(self):
        for bad in (
            "gauss",
            "uniform:1",
            "beta",
            "beta:2",
            "beta:2,5,7",
            "beta:x,y",
            "beta:inf,1",
            "beta:0,1",
            "truncnormal:0.5",
            "truncnormal:0.5,nan",
            "truncnormal:0.5,-1",
        ):
            with pytest.raises(ValueError):
                parse_dist(bad)


def test_hashable_for_caching():
    seen = {Uniform01(): 1, Beta(2, 5): 2, TruncNormal(0.5, 0.15): 3}
    assert seen[Uniform01()] == 1
    assert seen[Beta(2.0, 5.0)] == 2
    assert seen[TruncNormal(0.5, 0.15)] == 3
