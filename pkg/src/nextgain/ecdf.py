"""Empirical CDFs of observed accuracies and DKW confidence bands.

The accuracy domain is hard-contracted to [0,1]: every integral in the
estimator runs over [0,1] and the closed-form gain uses the sentinel
value 1 beyond the largest observation. Metrics on other scales must be
normalized first (the CLI provides min/max normalization flags).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "SortedSample",
    "StepCdf",
    "build_ecdf",
    "dkw_band",
    "dkw_epsilon",
    "eval_ecdf",
]


@dataclass(frozen=True)
class SortedSample:
    """Ascending accuracy observations x_1 <= ... <= x_n, each in [0,1].

    Construct directly from already-sorted values, or via
    :meth:`from_unsorted` for arrival-order data.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) == 0:
            raise ValueError("sample must contain at least one value")
        prev = 0.0
        for v in values:
            if not (0.0 <= v <= 1.0):  # also rejects NaN
                raise ValueError(f"accuracy {v!r} outside [0, 1]")
            if v < prev:
                raise ValueError("values must be non-decreasing")
            prev = v

    @classmethod
    def from_unsorted(cls, values: Iterable[float]) -> "SortedSample":
        return cls(tuple(sorted(float(v) for v in values)))

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class StepCdf:
    """Right-continuous step function on [0,1].

    ``levels[i]`` is the value on [breakpoints[i], breakpoints[i+1]) and
    the last level extends to the domain edge at 1; the value before the
    first breakpoint is 0. ECDFs built by :func:`build_ecdf` additionally
    have final level exactly 1 and levels on the grid {0, 1/n, ..., 1};
    band outputs of :func:`dkw_band` keep only the structural invariants
    validated here.
    """

    breakpoints: tuple[float, ...]
    levels: tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        lv = tuple(float(l) for l in self.levels)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "levels", lv)
        if len(bp) == 0 or len(bp) != len(lv):
            raise ValueError("need one level per breakpoint, at least one of each")
        prev_b = -math.inf
        prev_l = -math.inf
        for b, l in zip(bp, lv):
            if not (0.0 <= b <= 1.0):
                raise ValueError(f"breakpoint {b!r} outside [0, 1]")
            if b <= prev_b:
                raise ValueError("breakpoints must be strictly increasing")
            if not (0.0 <= l <= 1.0):
                raise ValueError(f"level {l!r} outside [0, 1]")
            if l < prev_l:
                raise ValueError("levels must be non-decreasing")
            prev_b, prev_l = b, l


def build_ecdf(sample: SortedSample) -> StepCdf:
    """Empirical CDF of the sample: F(x) = (number of values <= x) / n.

    Duplicate values merge into a single breakpoint whose level jumps by
    the duplicate multiplicity over n.
    """
    values = np.asarray(sample.values, dtype=np.float64)
    uniq, counts = np.unique(values, return_counts=True)
    levels = np.cumsum(counts) / sample.n
    return StepCdf(tuple(uniq.tolist()), tuple(levels.tolist()))


def eval_ecdf(cdf: StepCdf, x: float) -> float:
    """Right-continuous evaluation; 0 below the first breakpoint."""
    i = bisect_right(cdf.breakpoints, x)
    return 0.0 if i == 0 else cdf.levels[i - 1]


def dkw_epsilon(n: int, alpha: float) -> float:
    """Two-sided DKW/Massart confidence radius sqrt(ln(2/alpha) / (2n)).

    Natural logarithm, matching Massart's constant-2 formulation.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ValueError(f"sample size must be a positive integer, got {n!r}")
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def dkw_band(cdf: StepCdf, epsilon: float) -> tuple[StepCdf, StepCdf]:
    """Clamped confidence band (lower, upper) around a step CDF.

    On the accuracy domain [0,1]: lower(x) = max(F(x)-eps, 0) and
    upper(x) = min(F(x)+eps, 1) pointwise. The upper band gains a
    breakpoint at 0 (level min(eps,1)) when the CDF starts above 0, since
    the band is already eps-high there. Clamping only tightens the band:
    CDF values outside [0,1] are meaningless.
    """
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon!r}")
    if epsilon == 0.0:
        return cdf, cdf
    lower = StepCdf(cdf.breakpoints, tuple(max(l - epsilon, 0.0) for l in cdf.levels))
    hi_levels = tuple(min(l + epsilon, 1.0) for l in cdf.levels)
    if cdf.breakpoints[0] > 0.0:
        upper = StepCdf((0.0,) + cdf.breakpoints, (min(epsilon, 1.0),) + hi_levels)
    else:
        upper = StepCdf(cdf.breakpoints, hi_levels)
    return lower, upper
