"""Pure-NumPy reference implementations of the hot kernels.

These are the import-time fallback when the compiled `nextgain._speedups`
extension is unavailable (or when NEXTGAIN_PURE=1). Semantics must match
the compiled twins; the cross-backend tests in tests/test_kernels.py pin
the two against each other.
"""

from __future__ import annotations

import numpy as np

from nextgain import special


def closed_form_gain(values: np.ndarray) -> float:
    """Expected-gain sum over an ascending sample in [0,1].

    S_n = sum_{j=1}^{n-1} (j/n)^n (1 - j/n) (x_{j+1} - x_j); the j=n term
    always vanishes against the implicit sentinel x_{n+1} = 1.
    """
    n = values.shape[0]
    if n <= 1:
        return 0.0
    j = np.arange(1, n, dtype=np.float64) / n
    coeff = j**n * (1.0 - j)
    return float(np.dot(coeff, np.diff(values)))


def step_gain_integral(breaks: np.ndarray, levels: np.ndarray, k: int) -> float:
    """Exact integral of F^k (1-F) over [0,1] for a right-continuous step F.

    The segment before the first breakpoint has level 0 and contributes
    nothing for k >= 1; the last segment runs to the domain edge at 1.
    """
    widths = np.diff(np.append(breaks, 1.0))
    return float(np.sum(levels**k * (1.0 - levels) * widths))


def band_integrals(
    breaks: np.ndarray, levels: np.ndarray, k: int, eps: float
) -> tuple[float, float]:
    """Exact step integrals of the clamped confidence-band integrands.

    lower: integrand max(F-eps, 0)^k * max(1-eps-F, 0)
    upper: integrand min(F+eps, 1)^k * (1+eps-F)

    Both integrals include the level-0 head segment [0, first breakpoint):
    its lower contribution is always 0, but its upper contribution
    min(eps,1)^k (1+eps) * width is not.
    """
    widths = np.diff(np.append(breaks, 1.0))
    lo = np.maximum(levels - eps, 0.0)
    hi = np.minimum(levels + eps, 1.0)
    lb = float(np.sum(lo**k * np.maximum(1.0 - eps - levels, 0.0) * widths))
    ub = float(np.sum(hi**k * (1.0 + eps - levels) * widths))
    head = breaks[0]
    if head > 0.0:
        ub += min(eps, 1.0) ** k * (1.0 + eps) * head
    return lb, ub


def sup_abs_dev_uniform(values: np.ndarray) -> float:
    """sup_x |ECDF(x) - x| for an ascending sample, exact at every jump.

    Checks both the level at each jump (i/n vs x_i) and the level just
    before it ((i-1)/n vs x_i), which is where the sup of a step-vs-line
    comparison must occur.
    """
    n = values.shape[0]
    i = np.arange(1, n + 1, dtype=np.float64)
    above = np.max(i / n - values)
    below = np.max(values - (i - 1.0) / n)
    return float(max(above, below))


def normal_cdf_batch(z: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape[0], dtype=np.float64)
    cdf = special.normal_cdf
    for idx in range(z.shape[0]):
        out[idx] = cdf(z[idx])
    return out


def betainc_batch(a: float, b: float, x: np.ndarray) -> np.ndarray:
    out = np.empty(x.shape[0], dtype=np.float64)
    betainc = special.regularized_incomplete_beta
    for idx in range(x.shape[0]):
        out[idx] = betainc(a, b, x[idx])
    return out
