"""Estimate what one more random-search iteration is worth.

Given k observed accuracies in [0, 1], the library estimates the
expected improvement of the running best from iteration k+1, brackets
it with DKW confidence bands, bounds the estimation error by
6*sqrt(ln k / k), and turns the result into a continue/stop verdict.
A Gaussian companion module lower-bounds what any plug-in estimate of
the expected improvement must miss by, and a simulation harness checks
every advertised inequality by seeded Monte Carlo.

Heavy kernels run through a compiled extension when available, with a
pure-NumPy fallback selected at import (see nextgain.kernels.BACKEND).
"""

from nextgain.distributions import Beta, TruncNormal, Uniform01, parse_dist
from nextgain.ecdf import (
    SortedSample,
    StepCdf,
    build_ecdf,
    dkw_band,
    dkw_epsilon,
    eval_ecdf,
)
from nextgain.gain_estimator import (
    CurvePoint,
    ErrorBound,
    EstimateReport,
    Verdict,
    confidence_integrals,
    error_bound,
    estimate_report,
    expected_gain_closed_form,
    expected_gain_integral,
    gain_curve,
)
from nextgain.gaussian_bounds import (
    DiscrepancyBounds,
    GammaRatioCheck,
    GammaUnderflowError,
    GaussianParams,
    HessianDiag,
    TailUnderflowError,
    chi_scaled_cdf,
    err_ma_lower_bounds,
    expected_improvement,
    gamma_ratio_inequality_check,
    improvement_gradient,
    improvement_hessian_diag,
    inverse_mills_conditional_mean,
    mu_gap_conditional_mean,
    normal_pdf_cdf,
    regularized_gamma_upper,
    sigma_gap_floor,
    sigma_gap_lower_bound,
)
from nextgain.sim_harness import (
    SimulationReport,
    SimulationSpec,
    bracketing_experiment,
    dkw_coverage_experiment,
    estimator_error_experiment,
    mu_sigma_discrepancy_experiment,
    plug_in_errors,
    plug_in_mae_experiment,
    trial_rng,
    true_expected_gain,
)

__version__ = "0.1.0"

__all__ = [
    "Beta",
    "CurvePoint",
    "DiscrepancyBounds",
    "ErrorBound",
    "EstimateReport",
    "GammaRatioCheck",
    "GammaUnderflowError",
    "GaussianParams",
    "HessianDiag",
    "SimulationReport",
    "SimulationSpec",
    "SortedSample",
    "StepCdf",
    "TailUnderflowError",
    "TruncNormal",
    "Uniform01",
    "Verdict",
    "__version__",
    "bracketing_experiment",
    "build_ecdf",
    "chi_scaled_cdf",
    "confidence_integrals",
    "dkw_band",
    "dkw_coverage_experiment",
    "dkw_epsilon",
    "err_ma_lower_bounds",
    "error_bound",
    "estimate_report",
    "estimator_error_experiment",
    "eval_ecdf",
    "expected_gain_closed_form",
    "expected_gain_integral",
    "expected_improvement",
    "gain_curve",
    "gamma_ratio_inequality_check",
    "improvement_gradient",
    "improvement_hessian_diag",
    "inverse_mills_conditional_mean",
    "mu_gap_conditional_mean",
    "mu_sigma_discrepancy_experiment",
    "normal_pdf_cdf",
    "parse_dist",
    "plug_in_errors",
    "plug_in_mae_experiment",
    "regularized_gamma_upper",
    "sigma_gap_floor",
    "sigma_gap_lower_bound",
    "trial_rng",
    "true_expected_gain",
]
