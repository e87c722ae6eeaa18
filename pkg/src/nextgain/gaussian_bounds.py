"""Gaussian machinery for lower-bounding the estimator's discrepancy.

For accuracy X ~ N(mu, sigma) (sigma is the standard deviation, never the
variance) and a best-so-far threshold alpha, everything is expressed
through z = (alpha - mu)/sigma. The expected improvement from one more
draw is

    I(mu, sigma, alpha) = (mu - alpha)(1 - Phi(z)) + sigma*phi(z),

computed here in standardized form sigma*(phi(z) - z*sf(z)) to avoid
cancellation for extreme z (sigma^2 f_X(alpha) = sigma f_Z(z)).

Known formula discrepancies, on purpose (see also README):

* ``improvement_hessian_diag`` returns the classical region diagnostic
  (2z^2-3) z^2 phi(z)/sigma for the sigma-sigma entry, whose sign flips
  at |z| = sqrt(3/2). Direct differentiation of ``expected_improvement``
  gives z^2 phi(z)/sigma >= 0 for every z (I is a perspective function of
  a convex function of alpha, hence convex in sigma everywhere); the test
  suite verifies the direct curvature separately so the difference stays
  visible.
* ``mu_gap_conditional_mean`` returns sqrt(2/pi)*sigma/sqrt(n). A
  sigma^2/n scaling is sometimes quoted for this quantity; it is
  dimensionally inconsistent and fails the Monte Carlo check for
  (sigma, n) = (1, 100) by over 100 standard errors (sim_harness runs
  that experiment).
* ``gamma_ratio_inequality_check`` evaluates the floor
  Gamma(s, x+y)/Gamma(s, x) >= e^{-y}, which provably holds only for
  s >= 1 (equality at s = 1). For s < 1 the check truthfully reports
  holds=False, e.g. at (s, x, y) = (0.5, 1, 1) where the ratio is
  0.2893 < e^{-1} = 0.3679.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from nextgain.special import (
    GammaUnderflowError,
    normal_cdf,
    normal_pdf,
    normal_sf,
    regularized_gamma_upper,
)

__all__ = [
    "DiscrepancyBounds",
    "GammaRatioCheck",
    "GammaUnderflowError",
    "GaussianParams",
    "HessianDiag",
    "TailUnderflowError",
    "chi_scaled_cdf",
    "err_ma_lower_bounds",
    "expected_improvement",
    "gamma_ratio_inequality_check",
    "improvement_gradient",
    "improvement_hessian_diag",
    "inverse_mills_conditional_mean",
    "mu_gap_conditional_mean",
    "normal_pdf_cdf",
    "regularized_gamma_upper",
    "sigma_gap_floor",
    "sigma_gap_lower_bound",
]

_SQRT_3_2 = math.sqrt(1.5)
_SQRT_2_PI = math.sqrt(2.0 / math.pi)
_SQRT_TAU = math.sqrt(2.0 * math.pi)

# Beyond this z the normal survival function underflows double precision
# (sf(37) ~ 5.7e-300), so conditional means cannot be formed.
_TAIL_Z_LIMIT = 37.0


class TailUnderflowError(ArithmeticError):
    """Raised when 1 - Phi(z) underflows and a conditional mean is requested."""


@dataclass(frozen=True)
class GaussianParams:
    """(mu, sigma, alpha): population mean and sd of accuracy, plus the
    current best accuracy acting as the truncation threshold."""

    mu: float
    sigma: float
    alpha: float

    def __post_init__(self):
        if not (self.sigma > 0.0):
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if not math.isfinite(self.z):
            raise ValueError(f"standardized threshold z is not finite for {self!r}")

    @property
    def z(self) -> float:
        return (self.alpha - self.mu) / self.sigma


@dataclass(frozen=True)
class DiscrepancyBounds:
    """Printed lower bounds for the plug-in estimator's mean absolute error,
    plus the parameter-discrepancy quantities they are built from.

    ``err_ma_tail`` is present iff alpha >= mu + sqrt(3/2)*sigma (the
    region where the tail derivation applies); all fields are >= 0.
    """

    n: int
    err_ma_general: float
    err_ma_tail: float | None
    mu_gap_expected: float
    sigma_gap_lower: float


class HessianDiag(NamedTuple):
    d2I_dmu2: float
    d2I_dsigma2: float
    sigma_convex: bool


class GammaRatioCheck(NamedTuple):
    ratio: float
    floor: float
    holds: bool


def normal_pdf_cdf(z: float) -> tuple[float, float]:
    """Standard normal (pdf, cdf) at z.

    cdf goes through the in-house complementary error function; absolute
    error <= 1e-14 on |z| <= 8 with correct saturation beyond (cdf
    reaches exactly 1.0 once the complement underflows).
    """
    return normal_pdf(z), normal_cdf(z)


def inverse_mills_conditional_mean(p: GaussianParams) -> float:
    """E[X | X > alpha] = mu + sigma*phi(z)/(1 - Phi(z)).

    The survival function is evaluated directly (full relative precision
    in the tail), but beyond z = 37 it underflows double precision and
    the conditional mean is refused.
    """
    z = p.z
    if z > _TAIL_Z_LIMIT:
        raise TailUnderflowError(
            f"1 - Phi({z:.3g}) underflows double precision; conditional mean undefined"
        )
    return p.mu + p.sigma * normal_pdf(z) / normal_sf(z)


def expected_improvement(p: GaussianParams) -> float:
    """I(mu, sigma, alpha) = E[(X - alpha)^+] for X ~ N(mu, sigma^2).

    Never negative; in the far right tail the quantity itself underflows
    harmlessly to 0.
    """
    z = p.z
    return p.sigma * (normal_pdf(z) - z * normal_sf(z))


def improvement_gradient(p: GaussianParams) -> tuple[float, float]:
    """(dI/dmu, dI/dsigma) = (1 - Phi(z), phi(z)).

    Both components are nonnegative, so I is monotone non-decreasing in
    mu and in sigma. Matches central finite differences of
    :func:`expected_improvement` (the test suite checks this over a wide
    z grid).
    """
    z = p.z
    return normal_sf(z), normal_pdf(z)


def improvement_hessian_diag(p: GaussianParams) -> HessianDiag:
    """Curvature diagnostics (d2I/dmu2, sigma-sigma diagnostic, region flag).

    The mu-mu entry phi(z)/sigma is the true second derivative and is
    nonnegative everywhere. The sigma-sigma entry is the classical
    diagnostic (2z^2-3) z^2 phi(z)/sigma: negative for 0 < |z| <
    sqrt(3/2), zero at z=0 and on the boundary, positive outside, which
    is exactly what ``sigma_convex = |z| >= sqrt(3/2)`` reports. Direct
    second differentiation of I in sigma instead gives z^2 phi(z)/sigma,
    nonnegative for every z; see the module docstring.
    """
    z = p.z
    pdf = normal_pdf(z)
    z2 = z * z
    return HessianDiag(
        d2I_dmu2=pdf / p.sigma,
        d2I_dsigma2=(2.0 * z2 - 3.0) * z2 * pdf / p.sigma,
        sigma_convex=abs(z) >= _SQRT_3_2,
    )


def mu_gap_conditional_mean(sigma: float, n: int) -> float:
    """E[mu_hat - mu | mu_hat > mu] = sqrt(2/pi) * sigma / sqrt(n).

    mu_hat - mu ~ N(0, sigma^2/n), and the conditional mean of a centered
    normal above 0 is sqrt(2/pi) times its standard deviation. (The
    sometimes-quoted sigma^2/n scaling is wrong; see module docstring.)
    """
    if not (sigma > 0.0):
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return _SQRT_2_PI * sigma / math.sqrt(n)


def sigma_gap_lower_bound(sigma: float, n: int, gamma: float | None = None) -> float:
    """Lower bound sigma*gamma*exp(-(gamma + gamma^2/2)(n-1)) on
    E[sigma_hat - sigma | sigma_hat > sigma], default gamma = 1/n.

    With the default gamma this dominates the simplified floor
    :func:`sigma_gap_floor` = sigma/(e^{3/2} n) for every n >= 2 and
    tends to sigma/(e*n) for large n.
    """
    if not (sigma > 0.0):
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    g = 1.0 / n if gamma is None else float(gamma)
    if not (g > 0.0):
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    return sigma * g * math.exp(-(g + 0.5 * g * g) * (n - 1))


def sigma_gap_floor(sigma: float, n: int) -> float:
    """Simplified floor sigma / (e^{3/2} n), always below the gamma form."""
    if not (sigma > 0.0):
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    return sigma / (math.exp(1.5) * n)


def chi_scaled_cdf(n: int, x: float) -> float:
    """CDF of sqrt(chi^2_{n-1} / (n-1)) at x, i.e. of sigma_hat/sigma.

    Equals F_{chi^2_{n-1}}((n-1) x^2) = 1 - Q((n-1)/2, (n-1) x^2 / 2).
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not (x >= 0.0):
        raise ValueError(f"x must be nonnegative, got {x!r}")
    return 1.0 - regularized_gamma_upper((n - 1) / 2.0, (n - 1) * x * x / 2.0)


def gamma_ratio_inequality_check(s: float, x: float, y: float) -> GammaRatioCheck:
    """Evaluate Gamma(s, x+y)/Gamma(s, x) against the floor e^{-y}.

    Gamma(s) cancels in the ratio, so it is computed from regularized
    values Q(s, x+y)/Q(s, x). ``holds`` allows a 1e-9 relative slack for
    floating-point rounding. The floor itself is a theorem only for
    s >= 1 (equality at s = 1, where Gamma(1, x) = e^{-x}); for s < 1
    the check reports the violation honestly.
    """
    if not (s > 0.0 and x > 0.0 and y > 0.0):
        raise ValueError(f"s, x, y must all be positive, got ({s!r}, {x!r}, {y!r})")
    q_x = regularized_gamma_upper(s, x)
    if q_x <= 0.0 or math.lgamma(s) + math.log(q_x) < math.log(1e-290):
        raise GammaUnderflowError(
            f"Gamma({s:.3g}, {x:.3g}) below 1e-290; ratio unreliable"
        )
    ratio = regularized_gamma_upper(s, x + y) / q_x
    floor = math.exp(-y)
    return GammaRatioCheck(ratio=ratio, floor=floor, holds=ratio >= floor * (1.0 - 1e-9))


def err_ma_lower_bounds(p: GaussianParams, n: int) -> DiscrepancyBounds:
    """Printed lower bounds on E|I(mu,sigma,alpha) - I(mu_hat,sigma_hat,alpha)|.

    general: sigma^2/(2 sqrt(2 pi) n) * (1 - Phi(z)), valid for all alpha;
    tail:    sigma/(2 e^{3/2} n) * z^2 * f_X(alpha) = z^2 phi(z)/(2 e^{3/2} n),
             populated only when alpha >= mu + sqrt(3/2) sigma.

    The constants are reported exactly as conventionally printed; the
    Monte Carlo experiment in sim_harness is the authoritative check that
    they really are lower bounds at the tested configurations.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    z = p.z
    sf = normal_sf(z)
    pdf = normal_pdf(z)
    general = p.sigma * p.sigma / (2.0 * _SQRT_TAU * n) * sf
    tail = z * z * pdf / (2.0 * math.exp(1.5) * n) if z >= _SQRT_3_2 else None
    return DiscrepancyBounds(
        n=n,
        err_ma_general=general,
        err_ma_tail=tail,
        mu_gap_expected=mu_gap_conditional_mean(p.sigma, n),
        sigma_gap_lower=sigma_gap_lower_bound(p.sigma, n),
    )
