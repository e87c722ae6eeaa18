"""Tests for sorted samples, step CDFs, and DKW confidence bands."""

import dataclasses
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nextgain.ecdf import SortedSample, StepCdf, build_ecdf, dkw_band, dkw_epsilon, eval_ecdf


class TestSortedSample:
    def test_basic_and_n(self):
        s = SortedSample((0.2, 0.6))
        assert s.values == (0.2, 0.6)
        assert s.n == 2

    def test_from_unsorted_sorts(self):
        s = SortedSample.from_unsorted([0.9, 0.1, 0.5, 0.5])
        assert s.values == (0.1, 0.5, 0.5, 0.9)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            SortedSample(())

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SortedSample((0.1, 1.2))
        with pytest.raises(ValueError):
            SortedSample((-0.01,))
        with pytest.raises(ValueError):
            SortedSample((0.1, math.nan))

    def test_rejects_decreasing(self):
        with pytest.raises(ValueError):
            SortedSample((0.6, 0.2))

    def test_frozen(self):
        s = SortedSample((0.5,))
        with pytest.raises(dataclasses.FrozenInstanceError):
            s.values = (0.1,)

    def test_coerces_to_float(self):
        s = SortedSample((0, 1))
        assert s.values == (0.0, 1.0)
        assert all(isinstance(v, float) for v in s.values)


class TestStepCdf:
    def test_validation(self):
        with pytest.raises(ValueError):
            StepCdf((), ())
        with pytest.raises(ValueError):
            StepCdf((0.1, 0.2), (0.5,))
        with pytest.raises(ValueError):
            StepCdf((0.2, 0.1), (0.5, 1.0))
        with pytest.raises(ValueError):
            StepCdf((0.1, 0.1), (0.5, 1.0))
        with pytest.raises(ValueError):
            StepCdf((0.1, 0.2), (0.8, 0.5))
        with pytest.raises(ValueError):
            StepCdf((1.5,), (1.0,))
        with pytest.raises(ValueError):
            StepCdf((0.5,), (1.5,))


class TestBuildEcdf:
    def test_two_point_sample(self):
        cdf = build_ecdf(SortedSample((0.2, 0.6)))
        assert cdf.breakpoints == (0.2, 0.6)
        assert cdf.levels == (0.5, 1.0)

    def test_duplicates_collapse(self):
        cdf = build_ecdf(SortedSample((0.3, 0.3, 0.3, 0.7)))
        assert cdf.breakpoints == (0.3, 0.7)
        assert cdf.levels == (0.75, 1.0)

    def test_levels_on_grid(self):
        rng = np.random.default_rng(7)
        vals = rng.random(23)
        cdf = build_ecdf(SortedSample.from_unsorted(vals))
        assert cdf.levels[-1] == 1.0
        for lv in cdf.levels:
            assert_allclose(lv * 23, round(lv * 23), atol=1e-12)


class TestEvalEcdf:
    def test_right_continuity_and_limits(self):
        cdf = build_ecdf(SortedSample((0.2, 0.6)))
        assert eval_ecdf(cdf, 0.0) == 0.0
        assert eval_ecdf(cdf, 0.19999) == 0.0
        assert eval_ecdf(cdf, 0.2) == 0.5
        assert eval_ecdf(cdf, 0.4) == 0.5
        assert eval_ecdf(cdf, 0.6) == 1.0
        assert eval_ecdf(cdf, 1.0) == 1.0

    def test_matches_counting_definition(self):
        rng = np.random.default_rng(11)
        vals = rng.integers(0, 10, size=40) / 10.0
        sample = SortedSample.from_unsorted(vals)
        cdf = build_ecdf(sample)
        for x in np.linspace(0.0, 1.0, 101):
            expected = np.count_nonzero(vals <= x) / 40.0
            assert eval_ecdf(cdf, float(x)) == pytest.approx(expected, abs=1e-12)


class TestDkwEpsilon:
    def test_frozen_values(self):
        # sqrt(ln(2/0.5) / 4), sqrt(ln(2/0.1) / 400), sqrt(ln(2/0.05) / 200),
        # computed once with mpmath at 40 digits and rounded to double.
        assert dkw_epsilon(2, 0.5) == 0.5887050112577373
        assert dkw_epsilon(200, 0.1) == 0.08654091913011426
        assert dkw_epsilon(100, 0.05) == 0.13581015157406195

    def test_quadruple_n_halves_epsilon_bitwise(self):
        # sqrt(c/(8n)) = sqrt(c/(2n))/2 exactly in binary arithmetic.
        for n in (1, 3, 17, 250):
            for alpha in (0.01, 0.1, 0.5, 0.9):
                assert dkw_epsilon(4 * n, alpha) == dkw_epsilon(n, alpha) / 2.0

    def test_validation(self):
        with pytest.raises(ValueError):
            dkw_epsilon(0, 0.1)
        with pytest.raises(ValueError):
            dkw_epsilon(-3, 0.1)
        with pytest.raises(ValueError):
            dkw_epsilon(True, 0.1)
        with pytest.raises(ValueError):
            dkw_epsilon(1.5, 0.1)
        with pytest.raises(ValueError):
            dkw_epsilon(10, 0.0)
        with pytest.raises(ValueError):
            dkw_epsilon(10, 1.0)
        with pytest.raises(ValueError):
            dkw_epsilon(10, -0.2)

    def test_accepts_numpy_integers(self):
        assert dkw_epsilon(np.int64(2), 0.5) == dkw_epsilon(2, 0.5)


class TestDkwBand:
    def test_zero_epsilon_identity(self):
        cdf = build_ecdf(SortedSample((0.2, 0.6)))
        lo, hi = dkw_band(cdf, 0.0)
        assert lo is cdf and hi is cdf

    def test_clamping_and_head_segment(self):
        cdf = build_ecdf(SortedSample((0.2, 0.6)))
        lo, hi = dkw_band(cdf, 0.6)
        assert lo.breakpoints == (0.2, 0.6)
        assert_allclose(lo.levels, (0.0, 0.4), atol=1e-15)
        # CDF starts above 0, so the upper band is already 0.6 high at 0.
        assert hi.breakpoints == (0.0, 0.2, 0.6)
        assert_allclose(hi.levels, (0.6, 1.0, 1.0), atol=1e-15)

    def test_no_head_segment_when_break_at_zero(self):
        cdf = build_ecdf(SortedSample((0.0, 0.5)))
        _, hi = dkw_band(cdf, 0.25)
        assert hi.breakpoints == (0.0, 0.5)
        assert_allclose(hi.levels, (0.75, 1.0), atol=1e-15)

    def test_head_level_clamped_to_one(self):
        cdf = build_ecdf(SortedSample((0.9,)))
        _, hi = dkw_band(cdf, 1.5)
        assert hi.levels[0] == 1.0

    def test_negative_epsilon_rejected(self):
        cdf = build_ecdf(SortedSample((0.5,)))
        with pytest.raises(ValueError):
            dkw_band(cdf, -0.1)

    def test_band_contains_true_cdf_usually(self):
        # Uniform data, so the true CDF is the identity on [0,1]. With
        # alpha = 0.05 the band should cover it in the vast majority of
        # seeded repetitions (binomial slack far below the 2/40 allowed).
        rng = np.random.default_rng(20260823)
        n, alpha = 60, 0.05
        eps = dkw_epsilon(n, alpha)
        misses = 0
        for _ in range(40):
            sample = SortedSample.from_unsorted(rng.random(n))
            lo, hi = dkw_band(build_ecdf(sample), eps)
            grid = np.linspace(0.0, 1.0, 201)
            ok = all(
                eval_ecdf(lo, float(x)) - 1e-12 <= x <= eval_ecdf(hi, float(x)) + 1e-12
                for x in grid
            )
            misses += 0 if ok else 1
        assert misses <= 2
