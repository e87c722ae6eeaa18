"""Expected accuracy gain of the next random-search iteration.

Given k observed accuracies with empirical CDF F, the point estimate is
s_k = integral over [0,1] of F^k (1-F), which for a sorted sample has the
exact closed form

    S_k = sum_{j=1}^{k} ((j/k)^k - (j/k)^{k+1}) (x_{j+1} - x_j),

with sentinel x_{k+1} = 1. Confidence integrals replace F by the clamped
DKW band edges, and the high-probability error bound 6*sqrt(ln k / k)
holds with probability at least 1 - 1/sqrt(k) under the confidence
parameter alpha = 1/sqrt(2k).
"""

from __future__ import annotations

import enum
import math
from bisect import insort
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from nextgain import kernels
from nextgain.ecdf import SortedSample, StepCdf, build_ecdf, dkw_epsilon

__all__ = [
    "CurvePoint",
    "ErrorBound",
    "EstimateReport",
    "Verdict",
    "confidence_integrals",
    "error_bound",
    "estimate_report",
    "expected_gain_closed_form",
    "expected_gain_integral",
    "gain_curve",
]


class Verdict(enum.Enum):
    CONTINUE = "continue"
    STOP = "stop"
    INCONCLUSIVE = "inconclusive"


class ErrorBound(NamedTuple):
    bound: float
    alpha: float
    confidence: float


class CurvePoint(NamedTuple):
    k: int
    s_k: float
    lb: float
    ub: float
    error_bound: float
    best_so_far: float


@dataclass(frozen=True)
class EstimateReport:
    """Point estimate, band, bound and verdict for one sample.

    Invariants (checked in tests): 0 <= lb <= s_k <= ub. Note s_k can
    exceed 1 - best_so_far: the estimate is the expected improvement of
    draw k+1 over the maximum of k fresh draws from the empirical CDF,
    not over the observed best, so e.g. the sample (0.0, 0.99) gives
    s_2 = 0.12375 > 0.01. ``error_bound`` is returned raw even when it
    exceeds 1; gains live in [0,1], so a bound >= 1 is vacuous (roughly
    k < 190) and callers should treat it as such rather than have it
    silently truncated.
    """

    k: int
    s_k: float
    alpha: float
    epsilon: float
    lb: float
    ub: float
    error_bound: float
    confidence: float
    best_so_far: float
    verdict: Verdict


def _validate_k(k: int, minimum: int = 1) -> None:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < minimum:
        raise ValueError(f"k must be an integer >= {minimum}, got {k!r}")


def expected_gain_closed_form(sample: SortedSample) -> float:
    """Exact closed-form S_n over a sorted sample (no quadrature).

    Identical samples give 0 (all gaps vanish), and n=1 gives 0 (the
    single coefficient is 1^1 - 1^2 = 0).
    """
    values = np.asarray(sample.values, dtype=np.float64)
    return kernels.closed_form_gain(values)


def expected_gain_integral(cdf: StepCdf, k: int) -> float:
    """Exact integral of F^k (1-F) over [0,1], segment by segment.

    The integrand is piecewise constant, so this is a finite sum, not
    numeric quadrature. When ``cdf`` comes from the same n=k samples it
    equals :func:`expected_gain_closed_form` up to rounding.
    """
    _validate_k(k)
    breaks = np.asarray(cdf.breakpoints, dtype=np.float64)
    levels = np.asarray(cdf.levels, dtype=np.float64)
    return kernels.step_gain_integral(breaks, levels, k)


def confidence_integrals(cdf: StepCdf, k: int, epsilon: float) -> tuple[float, float]:
    """Exact step integrals (lb, ub) of the clamped band integrands.

    lb integrates max(F-eps,0)^k * max(1-eps-F,0) and ub integrates
    min(F+eps,1)^k * (1+eps-F). The argument clamps keep both integrands
    meaningful (CDF values outside [0,1] are not) and only tighten the
    band, preserving lb <= true gain <= ub under the DKW event. lb is
    floored at 0; ub is reported raw (it may exceed 1 for large eps;
    verdict logic caps it against the remaining headroom instead).
    """
    _validate_k(k)
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon!r}")
    breaks = np.asarray(cdf.breakpoints, dtype=np.float64)
    levels = np.asarray(cdf.levels, dtype=np.float64)
    lb, ub = kernels.band_integrals(breaks, levels, k, epsilon)
    return max(lb, 0.0), ub


def error_bound(k: int) -> ErrorBound:
    """High-probability deviation bound for the plug-in gain estimate.

    Returns (6*sqrt(ln k / k), alpha = 1/sqrt(2k),
    confidence = 1 - 1/sqrt(k)). Requires k >= 2: at k=1 the bound
    degenerates (ln 1 = 0) and the confidence is 0.
    """
    _validate_k(k, minimum=2)
    return ErrorBound(
        bound=6.0 * math.sqrt(math.log(k) / k),
        alpha=1.0 / math.sqrt(2.0 * k),
        confidence=1.0 - 1.0 / math.sqrt(k),
    )


def _verdict(s_k: float, ub: float, best_so_far: float, threshold: float) -> Verdict:
    # Stop takes precedence: s_k <= ub always, but s_k can exceed
    # 1 - best (see EstimateReport), so both branches may fire when
    # 1 - best < threshold <= s_k. No further gain is realizable beyond
    # the headroom, so Stop wins.
    if min(ub, 1.0 - best_so_far) < threshold:
        return Verdict.STOP
    if s_k >= threshold:
        return Verdict.CONTINUE
    return Verdict.INCONCLUSIVE


def estimate_report(
    sample: SortedSample,
    stop_threshold: float,
    alpha: float | None = None,
) -> EstimateReport:
    """Assemble the full estimate: point value, band, bound, verdict.

    ``alpha`` overrides only the DKW radius (hence epsilon/lb/ub); the
    ``error_bound`` and ``confidence`` fields keep their k-based
    definitions, which are stated for the default alpha = 1/sqrt(2k).

    Verdict rule (a library convention, not a classical result): Stop
    when min(ub, 1 - best_so_far) < stop_threshold, Continue when
    s_k >= stop_threshold, Inconclusive otherwise.
    """
    k = sample.n
    _validate_k(k, minimum=2)
    if not (stop_threshold >= 0.0):
        raise ValueError(f"stop threshold must be >= 0, got {stop_threshold!r}")
    eb = error_bound(k)
    used_alpha = eb.alpha if alpha is None else float(alpha)
    epsilon = dkw_epsilon(k, used_alpha)
    cdf = build_ecdf(sample)
    s_k = expected_gain_closed_form(sample)
    lb, ub = confidence_integrals(cdf, k, epsilon)
    best = sample.values[-1]
    return EstimateReport(
        k=k,
        s_k=s_k,
        alpha=used_alpha,
        epsilon=epsilon,
        lb=lb,
        ub=ub,
        error_bound=eb.bound,
        confidence=eb.confidence,
        best_so_far=best,
        verdict=_verdict(s_k, ub, best, stop_threshold),
    )


def gain_curve(values: Sequence[float]) -> list[CurvePoint]:
    """Per-prefix estimates over a run in arrival order.

    Entry j holds the estimate over the first j accuracies, j = 2..n.
    Arrival order never affects s_k (the estimator depends only on the
    empirical distribution), so each prefix is simply re-sorted; an
    incremental insertion keeps the sweep at O(n^2) worst case.
    """
    vals = [float(v) for v in values]
    if len(vals) < 2:
        raise ValueError("gain curve needs at least two observations")
    for v in vals:
        if not (0.0 <= v <= 1.0):
            raise ValueError(f"accuracy {v!r} outside [0, 1]")
    points: list[CurvePoint] = []
    acc: list[float] = [vals[0]]
    for j in range(2, len(vals) + 1):
        insort(acc, vals[j - 1])
        prefix = np.asarray(acc, dtype=np.float64)
        eb = error_bound(j)
        epsilon = dkw_epsilon(j, eb.alpha)
        s_k = kernels.closed_form_gain(prefix)
        uniq, counts = np.unique(prefix, return_counts=True)
        levels = np.cumsum(counts) / j
        lb, ub = kernels.band_integrals(uniq, levels, j, epsilon)
        points.append(
            CurvePoint(
                k=j,
                s_k=s_k,
                lb=max(lb, 0.0),
                ub=ub,
                error_bound=eb.bound,
                best_so_far=acc[-1],
            )
        )
    return points
