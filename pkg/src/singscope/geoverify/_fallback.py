"""Pure numpy versions of the compiled kernels (same signatures and results)."""

from __future__ import annotations

import numpy as np


def grid_count(coeffs, e1, e2, x1_lo, x1_hi, n1, x2_lo, x2_hi, n2, target, tol):
    """Number of midpoint cells of the n1 x n2 grid with |phi - target| <= tol."""
    coeffs = np.asarray(coeffs, dtype=float)
    e1 = np.asarray(e1, dtype=np.int64)
    e2 = np.asarray(e2, dtype=np.int64)
    x1 = x1_lo + (np.arange(n1) + 0.5) * ((x1_hi - x1_lo) / n1)
    x2 = x2_lo + (np.arange(n2) + 0.5) * ((x2_hi - x2_lo) / n2)
    deg2 = int(e2.max()) if len(e2) else 0
    # column polynomials in x2, one row per x1 midpoint
    cols = np.zeros((n1, deg2 + 1))
    for c, a, b in zip(coeffs, e1, e2):
        cols[:, b] += c * x1**a
    count = 0
    chunk = max(1, 2_000_000 // max(n2, 1))
    for start in range(0, n1, chunk):
        block = cols[start:start + chunk]
        val = np.repeat(block[:, deg2:deg2 + 1], n2, axis=1)
        for j in range(deg2 - 1, -1, -1):
            val = val * x2[None, :] + block[:, j:j + 1]
        count += int(np.count_nonzero(np.abs(val - target) <= tol))
    return count


def osc_sum(nodes, weights, amplitude, phase_coeffs, lam):
    """Sum of w * a * exp(i*lam*phase(x)) over the nodes; phase given by ascending coefficients."""
    nodes = np.asarray(nodes, dtype=float)
    ph = np.zeros_like(nodes)
    for c in np.asarray(phase_coeffs, dtype=float)[::-1]:
        ph = ph * nodes + c
    return complex(np.sum(np.asarray(weights) * np.asarray(amplitude) * np.exp(1j * lam * ph)))
