"""Kernel backend selection.

The compiled extension (nextgain._speedups, Cython) is preferred when it
imported cleanly; otherwise the pure-NumPy fallback is used. Setting the
environment variable NEXTGAIN_PURE=1 forces the fallback, which is how the
benchmark and the cross-backend tests exercise both paths in one machine.
"""

from __future__ import annotations

import os

__all__ = [
    "BACKEND",
    "band_integrals",
    "betainc_batch",
    "closed_form_gain",
    "normal_cdf_batch",
    "step_gain_integral",
    "sup_abs_dev_uniform",
]

_force_pure = os.environ.get("NEXTGAIN_PURE", "").strip() not in ("", "0")

if _force_pure:
    from nextgain.kernels import _fallback as _impl

    BACKEND = "pure"
else:
    try:
        from nextgain import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from nextgain.kernels import _fallback as _impl  # type: ignore[no-redef]

        BACKEND = "pure"

closed_form_gain = _impl.closed_form_gain
step_gain_integral = _impl.step_gain_integral
band_integrals = _impl.band_integrals
sup_abs_dev_uniform = _impl.sup_abs_dev_uniform
normal_cdf_batch = _impl.normal_cdf_batch
betainc_batch = _impl.betainc_batch
