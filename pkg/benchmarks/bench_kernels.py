"""Timings: compiled kernels against the pure-NumPy fallback.

Runs each hot kernel on a representative input under both backends and
prints per-call times with the speedup factor. Invoke from a checkout:

    python3 benchmarks/bench_kernels.py [--repeat N] [--size N]
"""

import argparse
import timeit

import numpy as np

from nextgain.kernels import _fallback

try:
    from nextgain import _speedups
except ImportError:
    _speedups = None


def _inputs(size: int):
    rng = np.random.default_rng(20260823)
    values = np.sort(rng.random(size))
    uniq, counts = np.unique(rng.integers(0, size // 10, size=size) / (size // 10), return_counts=True)
    levels = np.cumsum(counts) / size
    z = np.linspace(-8.0, 8.0, size)
    x = np.linspace(0.0, 1.0, size)
    return {
        "closed_form_gain": (values,),
        "step_gain_integral": (uniq, levels, 256),
        "band_integrals": (uniq, levels, 256, 0.1),
        "sup_abs_dev_uniform": (values,),
        "normal_cdf_batch": (z,),
        "betainc_batch": (2.0, 5.0, x),
    }


def _time(fn, args, repeat: int) -> float:
    # Median-of-repeats over an auto-scaled loop count.
    loops = max(1, int(0.05 / max(timeit.timeit(lambda: fn(*args), number=3) / 3, 1e-9)))
    runs = timeit.repeat(lambda: fn(*args), number=loops, repeat=repeat)
    return sorted(runs)[len(runs) // 2] / loops


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions")
    parser.add_argument("--size", type=int, default=10**4, help="input array length")
    args = parser.parse_args()

    if _speedups is None:
        print("compiled extension not importable; nothing to compare")
        return 1

    inputs = _inputs(args.size)
    print(f"input size {args.size}, median of {args.repeat} repeats")
    print(f"{'kernel':<22} {'pure':>12} {'compiled':>12} {'speedup':>9}")
    for name, call_args in inputs.items():
        pure = _time(getattr(_fallback, name), call_args, args.repeat)
        fast = _time(getattr(_speedups, name), call_args, args.repeat)
        print(f"{name:<22} {pure * 1e6:>10.1f}us {fast * 1e6:>10.1f}us {pure / fast:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
