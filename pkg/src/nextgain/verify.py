"""Desk-scale verification suite behind ``nextgain verify``.

Thirteen named checks, each re-deriving one advertised guarantee from
scratch with fixed seeds: closed-form vs. integral equivalence, the
uniform analytic truth, the deviation bound's violation rate, DKW
coverage, confidence-band bracketing and width, the Gaussian
improvement identities and curvature sign flip, the incomplete-gamma
ratio floor, the two estimator-discrepancy results, the plug-in MAE
floors, and end-to-end determinism.

One check fails by design: ``gamma-ratio`` sweeps shape values s over
(0, 20], but the e^{-y} floor on Gamma(s, x+y)/Gamma(s, x) is a theorem
only for s >= 1. Sub-1 shapes genuinely violate it (for example
(s, x, y) = (0.5, 1, 1) gives 0.2893 < e^{-1} = 0.3679), and the check
reports those violations rather than quietly narrowing the sweep; a
violation at s >= 1 would be an actual implementation bug.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from nextgain import distributions, ecdf, gain_estimator, gaussian_bounds, sim_harness

__all__ = ["CHECK_NAMES", "CheckResult", "run_checks"]

_SEED = 20260823

# Gradient finite-difference probe grid: 33 points. sigma = 1 and the
# [-4, 4] span keep the sigma-difference quotient clear of catastrophic
# cancellation (at z = -4 the improvement is ~4.0 while the sigma
# sensitivity is ~1.3e-4, which is as skewed as 1e-6 relative accuracy
# of a central difference can tolerate).
_FD_GRID = np.linspace(-4.0, 4.0, 33)

_THREE_DISTS = (
    distributions.Uniform01(),
    distributions.Beta(2.0, 5.0),
    distributions.TruncNormal(0.5, 0.15),
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _random_unit_sample(rng: np.random.Generator, n: int) -> np.ndarray:
    # Mixed families, including two that force ties (clipping piles mass
    # onto 0/1, rounding quantizes), so the closed form and the step
    # integral are compared on duplicated values too.
    mode = int(rng.integers(0, 5))
    if mode == 0:
        return rng.random(n)
    if mode == 1:
        return rng.beta(2.0, 5.0, n)
    if mode == 2:
        return rng.beta(0.5, 0.5, n)
    if mode == 3:
        return np.clip(rng.normal(0.5, 0.25, n), 0.0, 1.0)
    return np.round(rng.random(n), 2)


def _check_closed_form_integral() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 513))
        sample = ecdf.SortedSample.from_unsorted(_random_unit_sample(rng, n))
        closed = gain_estimator.expected_gain_closed_form(sample)
        integral = gain_estimator.expected_gain_integral(ecdf.build_ecdf(sample), n)
        worst = max(worst, abs(closed - integral))
    return worst <= 1e-10, (
        f"max |closed_form - step_integral| = {worst:.3g} over 1000 samples (tol 1e-10)"
    )


def _check_uniform_analytic() -> tuple[bool, str]:
    uniform = distributions.Uniform01()
    worst = 0.0
    for k in range(1, 65):
        truth = 1.0 / ((k + 1) * (k + 2))
        worst = max(worst, abs(sim_harness.true_expected_gain(uniform, k) - truth))
    return worst <= 1e-9, (
        f"max |quadrature - 1/((k+1)(k+2))| = {worst:.3g} for k = 1..64 (tol 1e-9)"
    )


def _check_error_bound() -> tuple[bool, str]:
    max_rate = 0.0
    min_headroom = math.inf
    ok = True
    for i, k in enumerate((64, 256, 1024)):
        for j, dist in enumerate(_THREE_DISTS):
            spec = sim_harness.SimulationSpec(dist, k, 2000, _SEED + 10 * i + j)
            report = sim_harness.estimator_error_experiment(spec)
            allowed = 1.0 / math.sqrt(k)
            limit = allowed + 3.0 * math.sqrt(allowed / 2000.0)
            ok = ok and report.violation_rate <= limit
            max_rate = max(max_rate, report.violation_rate)
            min_headroom = min(min_headroom, limit - report.violation_rate)
    return ok, (
        f"max violation rate {max_rate:.4g} over 9 configs "
        f"(min headroom to limit {min_headroom:.4g}; 0 violations expected)"
    )


def _check_dkw_coverage() -> tuple[bool, str]:
    rate = sim_harness.dkw_coverage_experiment(200, 0.1, 5000, _SEED + 40)
    limit = 0.1 + 3.0 * math.sqrt(0.09 / 5000.0)
    return rate <= limit, (
        f"sup-norm violation rate {rate:.4f} <= {limit:.4f} (n=200, alpha=0.1, 5000 trials)"
    )


def _check_bracketing() -> tuple[bool, str]:
    spec = sim_harness.SimulationSpec(distributions.Uniform01(), 64, 2000, _SEED + 50)
    coverage = sim_harness.bracketing_experiment(spec, 0.05)
    required = 0.95 - 3.0 * math.sqrt(0.0475 / 2000.0)
    return coverage >= required, (
        f"bracketing coverage {coverage:.4f} >= {required:.4f} (uniform, k=64, alpha=0.05)"
    )


def _check_band_width() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 60)
    min_slack = math.inf
    for i in range(300):
        k = int(rng.integers(2, 1025))
        # u scales k*eps^2 in (0, 0.1]; every sixth draw sits on the
        # boundary where the envelope is tightest.
        u = 1.0 if i % 6 == 0 else max(float(rng.random()), 1e-9)
        eps = math.sqrt(0.1 * u / k)
        n = int(rng.integers(1, 257))
        cdf = ecdf.build_ecdf(ecdf.SortedSample.from_unsorted(_random_unit_sample(rng, n)))
        lb, ub = gain_estimator.confidence_integrals(cdf, k, eps)
        envelope = (2.0 + 2.0 / math.e) * eps + k * eps * eps
        min_slack = min(min_slack, envelope - (ub - lb))
    return min_slack >= 0.0, (
        f"min envelope slack {min_slack:.3g} over 300 (k, eps) instances "
        f"with k*eps^2 <= 0.1 (must be >= 0)"
    )


def _check_gaussian_identities() -> tuple[bool, str]:
    worst_dev = 0.0
    index = 0
    for z in (-2.0, 0.0, 2.0):
        for sigma in (0.5, 1.0, 2.0):
            p = gaussian_bounds.GaussianParams(0.0, sigma, z * sigma)
            draws = sim_harness.trial_rng(_SEED + 70, index).normal(0.0, sigma, 10**6)
            index += 1
            gains = np.maximum(draws - p.alpha, 0.0)
            se = float(gains.std(ddof=1)) / 1000.0
            exact = gaussian_bounds.expected_improvement(p)
            worst_dev = max(worst_dev, abs(float(gains.mean()) - exact) / se)
    h = 1e-5
    worst_rel = 0.0
    for z in map(float, _FD_GRID):
        g_mu, g_sigma = gaussian_bounds.improvement_gradient(
            gaussian_bounds.GaussianParams(0.0, 1.0, z)
        )
        fd_mu = (
            gaussian_bounds.expected_improvement(gaussian_bounds.GaussianParams(h, 1.0, z))
            - gaussian_bounds.expected_improvement(gaussian_bounds.GaussianParams(-h, 1.0, z))
        ) / (2.0 * h)
        fd_sigma = (
            gaussian_bounds.expected_improvement(gaussian_bounds.GaussianParams(0.0, 1.0 + h, z))
            - gaussian_bounds.expected_improvement(gaussian_bounds.GaussianParams(0.0, 1.0 - h, z))
        ) / (2.0 * h)
        # abs() in the denominators keeps the ratio meaningful (and the
        # check failing) if a regression ever flips a gradient sign.
        worst_rel = max(
            worst_rel,
            abs(fd_mu - g_mu) / abs(g_mu),
            abs(fd_sigma - g_sigma) / abs(g_sigma),
        )
    passed = worst_dev <= 4.0 and worst_rel <= 1e-6
    return passed, (
        f"MC dev max {worst_dev:.2f} SE (limit 4) at 9 points; "
        f"gradient FD rel err max {worst_rel:.3g} (tol 1e-6, h=1e-5)"
    )


def _check_convexity_flip() -> tuple[bool, str]:
    ok = True
    for sigma in (0.5, 1.0, 2.0):
        for z in (-1.0, 1.0):
            d = gaussian_bounds.improvement_hessian_diag(
                gaussian_bounds.GaussianParams(0.0, sigma, z * sigma)
            )
            ok = ok and d.d2I_dsigma2 < 0.0 and not d.sigma_convex
        for z in (-1.5, 1.5):
            d = gaussian_bounds.improvement_hessian_diag(
                gaussian_bounds.GaussianParams(0.0, sigma, z * sigma)
            )
            ok = ok and d.d2I_dsigma2 > 0.0 and d.sigma_convex
    return ok, (
        "sigma-sigma diagnostic < 0 at |z|=1 and > 0 at |z|=1.5 for sigma in {0.5, 1, 2}"
    )


def _check_gamma_ratio() -> tuple[bool, str]:
    rng = np.random.default_rng(_SEED + 90)
    triples = (1.0 - rng.random((10**4, 3))) * 20.0
    sub1_violations = 0
    ge1_violations = 0
    for s, x, y in triples:
        check = gaussian_bounds.gamma_ratio_inequality_check(float(s), float(x), float(y))
        if not check.holds:
            if s >= 1.0:
                ge1_violations += 1
            else:
                sub1_violations += 1
    equality_err = 0.0
    for x, y in (1.0 - rng.random((50, 2))) * 20.0:
        check = gaussian_bounds.gamma_ratio_inequality_check(1.0, float(x), float(y))
        equality_err = max(equality_err, abs(check.ratio - check.floor) / check.floor)
    passed = sub1_violations == 0 and ge1_violations == 0 and equality_err <= 1e-12
    return passed, (
        f"{sub1_violations + ge1_violations}/10000 floor violations "
        f"({ge1_violations} at s>=1 where the floor is a theorem, {sub1_violations} at s<1 "
        f"where it is not); s=1 equality rel err {equality_err:.2e} (tol 1e-12)"
    )


def _check_mean_gap() -> tuple[bool, str]:
    ok = True
    separation = 0.0
    for sigma, n in ((1.0, 10), (2.0, 4), (1.0, 100)):
        mu_gaps, _ = sim_harness.discrepancy_gap_samples(sigma, n, 10**5, _SEED + 100 + n)
        mean = float(mu_gaps.mean())
        se = float(mu_gaps.std(ddof=1)) / math.sqrt(mu_gaps.size)
        expected = gaussian_bounds.mu_gap_conditional_mean(sigma, n)
        ok = ok and abs(mean - expected) <= 3.0 * se
        if (sigma, n) == (1.0, 100):
            variant = math.sqrt(2.0 / math.pi) * sigma * sigma / n
            separation = abs(mean - variant) / se
            ok = ok and separation > 10.0
    return ok, (
        f"conditional mean gap within 3 SE of sqrt(2/pi)*sigma/sqrt(n) at all 3 configs; "
        f"sigma^2/n variant rejected by {separation:.0f} SE at (sigma, n) = (1, 100)"
    )


def _check_sigma_gap() -> tuple[bool, str]:
    ok = True
    min_ratio = math.inf
    for n in (5, 20, 100):
        _, sigma_gaps = sim_harness.discrepancy_gap_samples(1.0, n, 10**5, _SEED + 110 + n)
        mean = float(sigma_gaps.mean())
        floor = 1.0 / (math.exp(1.5) * n)
        ok = ok and mean >= floor
        min_ratio = min(min_ratio, mean / floor)
    return ok, (
        f"conditional sigma gap >= 1/(e^1.5 n) for n in {{5, 20, 100}} "
        f"(min mean/floor = {min_ratio:.2f})"
    )


def _check_mae_floor() -> tuple[bool, str]:
    ok = True
    min_ratio = math.inf
    for alpha in (0.0, 2.0):
        p = gaussian_bounds.GaussianParams(0.0, 1.0, alpha)
        errors = sim_harness.plug_in_errors(p, 10, 10**5, _SEED + 120 + int(alpha))
        mae = float(errors.mean())
        se = float(errors.std(ddof=1)) / math.sqrt(errors.size)
        bounds = gaussian_bounds.err_ma_lower_bounds(p, 10)
        applicable = [bounds.err_ma_general]
        if bounds.err_ma_tail is not None:
            applicable.append(bounds.err_ma_tail)
        for floor in applicable:
            ok = ok and mae >= floor - 3.0 * se
            min_ratio = min(min_ratio, mae / floor)
    return ok, (
        f"plug-in MAE above every applicable printed floor at alpha in {{0, 2}}, n=10 "
        f"(min mae/floor = {min_ratio:.2f})"
    )


def _check_determinism() -> tuple[bool, str]:
    import contextlib
    import io

    from nextgain import cli  # deferred: cli imports this module at load time

    argv = [
        "simulate", "--experiment", "error-bound", "--dist", "beta:2,5",
        "--k", "64", "--trials", "400", "--seed", "123", "--json",
    ]
    outputs = []
    codes = []
    for extra in ((), (), ("--workers", "4")):
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            codes.append(cli.main([*argv, *extra]))
        outputs.append(buffer.getvalue())
    json_identical = outputs[0] == outputs[1] == outputs[2] and codes == [0, 0, 0]
    spec = sim_harness.SimulationSpec(distributions.Beta(2.0, 5.0), 64, 400, 123)
    sequential = sim_harness.estimator_error_experiment(spec, workers=1)
    parallel = sim_harness.estimator_error_experiment(spec, workers=4)
    bitwise = (
        sequential.violation_rate == parallel.violation_rate
        and sequential.mean_abs_error == parallel.mean_abs_error
        and sequential.bound == parallel.bound
    )
    passed = json_identical and bitwise
    if passed:
        detail = "repeat and cross-worker simulate JSON byte-identical; 1 vs 4 workers bitwise equal"
    else:
        detail = f"json_identical={json_identical}, sequential_vs_parallel_bitwise={bitwise}"
    return passed, detail


_CHECKS: tuple[tuple[str, Callable[[], tuple[bool, str]]], ...] = (
    ("closed-form-integral", _check_closed_form_integral),
    ("uniform-analytic", _check_uniform_analytic),
    ("error-bound", _check_error_bound),
    ("dkw-coverage", _check_dkw_coverage),
    ("bracketing", _check_bracketing),
    ("band-width", _check_band_width),
    ("gaussian-identities", _check_gaussian_identities),
    ("convexity-flip", _check_convexity_flip),
    ("gamma-ratio", _check_gamma_ratio),
    ("mean-gap", _check_mean_gap),
    ("sigma-gap", _check_sigma_gap),
    ("mae-floor", _check_mae_floor),
    ("determinism", _check_determinism),
)

CHECK_NAMES: tuple[str, ...] = tuple(name for name, _ in _CHECKS)


def run_checks(names: Iterable[str] | None = None) -> list[CheckResult]:
    """Run the named checks (all, in order, when names is None)."""
    table = dict(_CHECKS)
    selected = CHECK_NAMES if names is None else tuple(names)
    unknown = [n for n in selected if n not in table]
    if unknown:
        raise ValueError(
            f"unknown check(s) {', '.join(unknown)}; valid names: {', '.join(CHECK_NAMES)}"
        )
    results = []
    for name in selected:
        start = time.perf_counter()
        passed, detail = table[name]()
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results
