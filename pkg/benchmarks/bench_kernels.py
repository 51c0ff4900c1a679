"""Time the compiled kernels against the numpy fallback and check they agree.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from singscope.geoverify import _fallback
from singscope.poly import parse_poly

try:
    from singscope import _kernels
except ImportError:  # extension not built
    _kernels = None


def _best(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def grid_case():
    phi = parse_poly("x2^2 + x1^4 + 3*x1^2*x2^3")
    coeffs, e1, e2 = (np.ascontiguousarray(a, dtype=t) for a, t in zip(phi.to_arrays(), (np.float64, np.int64, np.int64)))
    args = (coeffs, e1, e2, -0.25, 0.25, 1024, -0.25, 0.25, 1024, 0.0, 2.0**-10)
    return "grid_count 1024x1024", args, lambda mod: mod.grid_count(*args)


def osc_case():
    n = 2_000_000
    x = np.linspace(0.0, 1.0, n)
    w = np.full(n, 1.0 / n)
    a = np.exp(-x)
    ph = np.array([0.0, 0.0, 1.0, 0.5])
    return "osc_sum 2e6 nodes", None, lambda mod: mod.osc_sum(x, w, a, ph, 4096.0)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _kernels is None:
        print("compiled extension not available; only the numpy fallback can run")
    print(f"{'case':24s} {'numpy [s]':>10s} {'cython [s]':>10s} {'speedup':>8s}  agree")
    for name, _, call in (grid_case(), osc_case()):
        t_np, r_np = _best(lambda: call(_fallback), args.repeat)
        if _kernels is None:
            print(f"{name:24s} {t_np:10.4f} {'-':>10s} {'-':>8s}  -")
            continue
        t_cy, r_cy = _best(lambda: call(_kernels), args.repeat)
        agree = r_np == r_cy if isinstance(r_np, int) else abs(r_np - r_cy) <= 1e-9 * max(1.0, abs(r_np))
        print(f"{name:24s} {t_np:10.4f} {t_cy:10.4f} {t_np / t_cy:8.1f}x  {agree}")


if __name__ == "__main__":
    main()
