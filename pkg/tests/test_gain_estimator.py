"""Tests for the next-iteration gain estimator and its confidence logic.

Closed form vs. step integral agreement is exact arithmetic; the
independent oracle for both is a 10^7-node midpoint Riemann sum of
F^k (1-F), whose error for a bounded piecewise-constant integrand with
m jumps is at most m/10^7.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nextgain.ecdf import SortedSample, build_ecdf, dkw_epsilon, eval_ecdf
from nextgain.gain_estimator import (
    Verdict,
    confidence_integrals,
    error_bound,
    estimate_report,
    expected_gain_closed_form,
    expected_gain_integral,
    gain_curve,
)


def _midpoint_gain(sample: SortedSample, k: int, nodes: int = 10**7) -> float:
    cdf = build_ecdf(sample)
    xs = (np.arange(nodes) + 0.5) / nodes
    breaks = np.asarray(cdf.breakpoints)
    levels = np.asarray(cdf.levels)
    idx = np.searchsorted(breaks, xs, side="right")
    f = np.where(idx == 0, 0.0, levels[np.maximum(idx - 1, 0)])
    return float(np.mean(f**k * (1.0 - f)))


class TestClosedForm:
    def test_two_point_value(self):
        # S_2 = (1/2)^2 (1 - 1/2) (0.6 - 0.2) + 1^2 (1 - 1) (1 - 0.6)
        #     = 0.25 * 0.5 * 0.4 = 0.05.
        got = expected_gain_closed_form(SortedSample((0.2, 0.6)))
        assert got == pytest.approx(0.05, rel=1e-15)

    def test_single_observation_gives_zero(self):
        assert expected_gain_closed_form(SortedSample((0.42,))) == 0.0

    def test_identical_values_give_zero(self):
        assert expected_gain_closed_form(SortedSample((0.3,) * 7)) == 0.0

    def test_matches_step_integral_exactly(self):
        rng = np.random.default_rng(101)
        for _ in range(200):
            n = int(rng.integers(1, 40))
            vals = rng.integers(0, 12, size=n) / 11.0  # frequent ties
            sample = SortedSample.from_unsorted(vals)
            closed = expected_gain_closed_form(sample)
            integral = expected_gain_integral(build_ecdf(sample), n)
            assert_allclose(integral, closed, rtol=1e-12, atol=1e-15)

    def test_against_midpoint_riemann_oracle(self):
        rng = np.random.default_rng(202)
        for n in (2, 5, 17):
            sample = SortedSample.from_unsorted(rng.random(n))
            oracle = _midpoint_gain(sample, n)
            got = expected_gain_closed_form(sample)
            assert got == pytest.approx(oracle, abs=1e-5)
            # m <= n jumps, each contributing at most one misassigned node.
            assert abs(got - oracle) <= (n + 1) / 10**7


class TestStepIntegral:
    def test_k_independent_of_sample_size(self):
        # Same CDF evaluated at a different power k than n.
        cdf = build_ecdf(SortedSample((0.2, 0.6)))
        oracle = _midpoint_gain(SortedSample((0.2, 0.6)), 5)
        assert expected_gain_integral(cdf, 5) == pytest.approx(oracle, abs=1e-6)

    def test_validation(self):
        cdf = build_ecdf(SortedSample((0.5,)))
        with pytest.raises(ValueError):
            expected_gain_integral(cdf, 0)
        with pytest.raises(ValueError):
            expected_gain_integral(cdf, True)


class TestConfidenceIntegrals:
    def test_epsilon_one_upper_value(self):
        # At eps = 1 the upper integrand is min(F+1, 1)^k (2 - F) = 2 - F
        # pointwise, so ub = 2 - integral(F) = 2 - 0.6 = 1.4 here.
        cdf = build_ecdf(SortedSample((0.2, 0.6)))
        lb, ub = confidence_integrals(cdf, 2, 1.0)
        assert lb == 0.0
        assert ub == pytest.approx(1.4, rel=1e-14)

    def test_zero_epsilon_collapses_to_point(self):
        sample = SortedSample.from_unsorted(np.random.default_rng(5).random(9))
        cdf = build_ecdf(sample)
        s_k = expected_gain_closed_form(sample)
        lb, ub = confidence_integrals(cdf, 9, 0.0)
        assert_allclose((lb, ub), (s_k, s_k), rtol=1e-12)

    def test_brackets_point_estimate(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = int(rng.integers(2, 30))
            sample = SortedSample.from_unsorted(rng.random(n))
            cdf = build_ecdf(sample)
            s_k = expected_gain_closed_form(sample)
            eps = dkw_epsilon(n, float(rng.uniform(0.01, 0.5)))
            lb, ub = confidence_integrals(cdf, n, eps)
            assert lb - 1e-12 <= s_k <= ub + 1e-12
            assert lb >= 0.0

    def test_against_midpoint_oracle(self):
        sample = SortedSample.from_unsorted(np.random.default_rng(7).random(6))
        cdf = build_ecdf(sample)
        eps = 0.3
        xs = (np.arange(10**6) + 0.5) / 10**6
        f = np.array([eval_ecdf(cdf, float(x)) for x in xs])
        lo = np.clip(f - eps, 0.0, None)
        lo_int = float(np.mean(lo**6 * np.clip(1.0 - eps - f, 0.0, None)))
        hi = np.clip(f + eps, None, 1.0)
        hi_int = float(np.mean(hi**6 * (1.0 + eps - f)))
        lb, ub = confidence_integrals(cdf, 6, eps)
        assert lb == pytest.approx(lo_int, abs=2e-5)
        assert ub == pytest.approx(hi_int, abs=2e-5)

    def test_validation(self):
        cdf = build_ecdf(SortedSample((0.5,)))
        with pytest.raises(ValueError):
            confidence_integrals(cdf, 2, -0.5)
        with pytest.raises(ValueError):
            confidence_integrals(cdf, 0, 0.1)


class TestErrorBound:
    def test_frozen_values(self):
        # Pure double arithmetic, asserted bitwise:
        # 6*sqrt(ln 2 / 2), 1/2, 1 - 1/sqrt(2).
        eb = error_bound(2)
        assert eb.bound == 3.5322300675464238
        assert eb.alpha == 0.5
        assert eb.confidence == 0.29289321881345254
        assert error_bound(100).bound == 1.2875796157736084
        assert error_bound(10000).bound == 0.18209125552621758

    def test_vacuous_crossover(self):
        # The bound exceeds 1 (vacuous for gains in [0,1]) up to k=188
        # and drops below 1 at k=189.
        assert error_bound(188).bound > 1.0
        assert error_bound(189).bound < 1.0

    def test_monotone_decreasing_beyond_three(self):
        prev = error_bound(3).bound
        for k in range(4, 400):
            cur = error_bound(k).bound
            assert cur < prev
            prev = cur

    def test_validation(self):
        for bad in (1, 0, -5, True, 2.0):
            with pytest.raises(ValueError):
                error_bound(bad)


class TestEstimateReport:
    def test_continue_verdict(self):
        rep = estimate_report(SortedSample((0.2, 0.6)), stop_threshold=0.01)
        assert rep.verdict is Verdict.CONTINUE
        assert rep.s_k == pytest.approx(0.05, rel=1e-15)
        assert rep.k == 2
        assert rep.best_so_far == 0.6
        assert rep.alpha == 0.5
        assert rep.epsilon == dkw_epsilon(2, 0.5)

    def test_stop_verdict(self):
        # 256 copies of 0.5: s_k = 0 and ub ~ eps/2 ~ 0.043, so a 0.05
        # threshold triggers Stop.
        rep = estimate_report(SortedSample((0.5,) * 256), stop_threshold=0.05)
        assert rep.verdict is Verdict.STOP
        assert rep.s_k == 0.0
        assert min(rep.ub, 1.0 - rep.best_so_far) < 0.05

    def test_stop_via_headroom(self):
        # Perfect accuracy already observed: 1 - best = 0 < threshold.
        rep = estimate_report(SortedSample((0.3, 1.0)), stop_threshold=0.001)
        assert rep.verdict is Verdict.STOP

    def test_inconclusive_verdict(self):
        # ub ~ 0.267 at k=4, so threshold 0.2 rules Stop out while
        # s_k = 0 rules Continue out.
        rep = estimate_report(SortedSample((0.5,) * 4), stop_threshold=0.2)
        assert rep.s_k == 0.0
        assert min(rep.ub, 1.0 - rep.best_so_far) >= 0.2
        assert rep.verdict is Verdict.INCONCLUSIVE

    def test_zero_threshold_never_stops(self):
        rep = estimate_report(SortedSample((0.5,) * 4), stop_threshold=0.0)
        assert rep.verdict is Verdict.CONTINUE

    def test_invariants_random(self):
        rng = np.random.default_rng(8)
        for _ in range(60):
            n = int(rng.integers(2, 50))
            rep = estimate_report(
                SortedSample.from_unsorted(rng.random(n)),
                stop_threshold=float(rng.uniform(0.0, 0.2)),
            )
            assert 0.0 <= rep.lb <= rep.s_k + 1e-12
            assert rep.s_k <= rep.ub + 1e-12

    def test_gain_can_exceed_observed_headroom(self):
        # s_k compares draw k+1 against the max of k fresh draws from
        # the empirical CDF, not against the observed best, so it is NOT
        # bounded by 1 - best: here s_2 = 0.125 * 0.99 >> 0.01.
        rep = estimate_report(SortedSample((0.0, 0.99)), stop_threshold=0.05)
        assert rep.s_k == pytest.approx(0.12375, rel=1e-14)
        assert rep.s_k > 1.0 - rep.best_so_far

    def test_stop_takes_precedence_over_continue(self):
        # Both branch conditions hold (1 - best = 0.01 < 0.05 <= s_k);
        # exhausted headroom wins.
        rep = estimate_report(SortedSample((0.0, 0.99)), stop_threshold=0.05)
        assert rep.s_k >= 0.05
        assert min(rep.ub, 1.0 - rep.best_so_far) < 0.05
        assert rep.verdict is Verdict.STOP

    def test_alpha_override_scope(self):
        # A custom alpha changes epsilon/lb/ub only; the k-based error
        # bound and confidence stay put.
        sample = SortedSample.from_unsorted(np.random.default_rng(9).random(20))
        base = estimate_report(sample, 0.01)
        wide = estimate_report(sample, 0.01, alpha=0.01)
        assert wide.alpha == 0.01
        assert wide.epsilon > base.epsilon
        assert wide.lb <= base.lb
        assert wide.ub >= base.ub
        assert wide.s_k == base.s_k
        assert wide.error_bound == base.error_bound
        assert wide.confidence == base.confidence

    def test_validation(self):
        with pytest.raises(ValueError):
            estimate_report(SortedSample((0.5,)), 0.01)
        with pytest.raises(ValueError):
            estimate_report(SortedSample((0.2, 0.6)), -0.01)
        with pytest.raises(ValueError):
            estimate_report(SortedSample((0.2, 0.6)), math.nan)


class TestGainCurve:
    def test_two_point_curve(self):
        (pt,) = gain_curve([0.2, 0.6])
        assert pt.k == 2
        assert pt.s_k == pytest.approx(0.05, rel=1e-15)
        assert pt.best_so_far == 0.6
        assert pt.error_bound == error_bound(2).bound

    def test_constant_log(self):
        pts = gain_curve([0.5] * 5)
        assert [p.k for p in pts] == [2, 3, 4, 5]
        assert all(p.s_k == 0.0 for p in pts)
        assert all(p.best_so_far == 0.5 for p in pts)

    def test_prefix_matches_estimate_report(self):
        rng = np.random.default_rng(10)
        vals = rng.random(12).tolist()
        pts = gain_curve(vals)
        for pt in pts:
            rep = estimate_report(SortedSample.from_unsorted(vals[: pt.k]), 0.01)
            assert pt.s_k == rep.s_k
            assert pt.lb == rep.lb
            assert pt.ub == rep.ub
            assert pt.error_bound == rep.error_bound
            assert pt.best_so_far == rep.best_so_far

    def test_arrival_order_invariance_at_full_length(self):
        rng = np.random.default_rng(11)
        vals = rng.random(15).tolist()
        last_a = gain_curve(vals)[-1]
        last_b = gain_curve(sorted(vals, reverse=True))[-1]
        assert last_a == last_b

    def test_gain_shrinks_with_history(self):
        rng = np.random.default_rng(12)
        pts = gain_curve(rng.random(500).tolist())
        by_k = {p.k: p.s_k for p in pts}
        assert by_k[500] < by_k[10]

    def test_validation(self):
        with pytest.raises(ValueError):
            gain_curve([0.5])
        with pytest.raises(ValueError):
            gain_curve([0.5, 1.2])
