"""Accuracy distributions on [0, 1] for the simulation harness.

Each distribution is a frozen (hence hashable) dataclass exposing
``label``, ``sample(rng, size)`` and ``cdf_grid(x)``; hashability lets
the harness cache CDF grids per distribution. ``parse_dist`` turns CLI
strings like ``beta:2,5`` into instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from nextgain import kernels
from nextgain.special import normal_cdf

__all__ = ["Beta", "TruncNormal", "Uniform01", "parse_dist"]

# Below this much mass inside [0, 1], rejection sampling is hopeless and
# the truncated distribution is numerically degenerate anyway.
_MIN_TRUNC_MASS = 1e-12


@dataclass(frozen=True)
class Uniform01:
    @property
    def label(self) -> str:
        return "uniform"

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.random(size)

    def cdf_grid(self, x: np.ndarray) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)


@dataclass(frozen=True)
class Beta:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValueError(f"Beta shape parameters must be positive, got {self!r}")

    @property
    def label(self) -> str:
        return f"beta:{self.a:g},{self.b:g}"

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.beta(self.a, self.b, size)

    def cdf_grid(self, x: np.ndarray) -> np.ndarray:
        x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
        return kernels.betainc_batch(self.a, self.b, x)


@dataclass(frozen=True)
class TruncNormal:
    """N(mu, sigma^2) conditioned on [0, 1]."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0.0):
            raise ValueError(f"sigma must be positive, got {self!r}")
        if self._mass() < _MIN_TRUNC_MASS:
            raise ValueError(
                f"less than {_MIN_TRUNC_MASS:g} of N({self.mu:g}, {self.sigma:g}^2) "
                "lies in [0, 1]; distribution is degenerate"
            )

    def _mass(self) -> float:
        return normal_cdf((1.0 - self.mu) / self.sigma) - normal_cdf(-self.mu / self.sigma)

    @property
    def label(self) -> str:
        return f"truncnormal:{self.mu:g},{self.sigma:g}"

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        out = np.empty(size, dtype=np.float64)
        filled = 0
        # Batch rejection; the constructor guarantees acceptance mass
        # >= 1e-12 so the loop terminates (expected batches ~ 1/mass).
        while filled < size:
            need = size - filled
            draw = max(need + 16, int(need / max(self._mass(), 1e-3)))
            cand = rng.normal(self.mu, self.sigma, draw)
            kept = cand[(cand >= 0.0) & (cand <= 1.0)][:need]
            out[filled : filled + kept.size] = kept
            filled += kept.size
        return out

    def cdf_grid(self, x: np.ndarray) -> np.ndarray:
        x = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0)
        lo = normal_cdf(-self.mu / self.sigma)
        mass = self._mass()
        z = (x - self.mu) / self.sigma
        return (kernels.normal_cdf_batch(z) - lo) / mass


def parse_dist(text: str):
    """Parse ``uniform``, ``beta:a,b`` or ``truncnormal:mu,sigma``."""
    name, _, argstr = text.strip().lower().partition(":")
    if name == "uniform":
        if argstr:
            raise ValueError("uniform takes no parameters")
        return Uniform01()
    if name in ("beta", "truncnormal"):
        parts = argstr.split(",") if argstr else []
        if len(parts) != 2:
            raise ValueError(f"{name} needs exactly two comma-separated parameters")
        try:
            u, v = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f"could not parse {name} parameters from {argstr!r}") from None
        if not (math.isfinite(u) and math.isfinite(v)):
            raise ValueError(f"{name} parameters must be finite")
        return Beta(u, v) if name == "beta" else TruncNormal(u, v)
    raise ValueError(
        f"unknown distribution {text!r}; expected uniform, beta:a,b or truncnormal:mu,sigma"
    )
