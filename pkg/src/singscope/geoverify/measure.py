"""Areas of sets {x in Omega : |x - z'| <= (d1, d2), |phi(x) - t| <= tau}.

The primary route integrates exact x2-lengths column by column (midpoint rule
in x1 only).  The secondary route counts cells of a tensor grid with the
compiled kernel; the two are compared in the test suite.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..classify import classify
from ..errors import ClassificationError, VerificationError
from ..newton import newton_distance, polyhedron_of
from ..poly.lattice import LatticePolynomial
from .fits import FitResult, dyadic_sweep, fit_loglog
from .kernels import grid_count

EPS = 0.25
OMEGA = (-EPS, EPS)
GRADIENT_LIMIT = 0.1
# the slab saturates Omega above roughly 2^-10, so the default sweep sits below it
DELTA_MIN = 2.0**-32
DELTA_MAX = 2.0**-10


def column_polys(poly: LatticePolynomial, x1: np.ndarray) -> np.ndarray:
    """Ascending x2-coefficients of phi(x1_i, .) for every x1_i (one row each)."""
    deg2 = max((j for _, j in poly.terms), default=0)
    C = np.zeros((len(x1), deg2 + 1))
    for (i, j), c in poly.terms.items():
        C[:, j] += float(c) * x1**i
    return C


def _eval_rows(C: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate row polynomials of C at the points x (same leading dimension)."""
    out = np.repeat(C[:, -1:], x.shape[1], axis=1)
    for j in range(C.shape[1] - 2, -1, -1):
        out = out * x + C[:, j:j + 1]
    return out


def _real_roots(C: np.ndarray) -> np.ndarray:
    """Real roots of each row polynomial, padded with NaN (shape rows x degree)."""
    n, width = C.shape
    deg = width - 1
    out = np.full((n, max(deg, 1)), np.nan)
    if deg == 0:
        return out
    scale = np.max(np.abs(C), axis=1, keepdims=True)
    scale[scale == 0] = 1.0
    nz = np.abs(C) > 1e-14 * scale
    eff = np.where(nz.any(axis=1), width - 1 - np.argmax(nz[:, ::-1], axis=1), 0)
    for d in range(1, deg + 1):
        rows = np.nonzero(eff == d)[0]
        if len(rows) == 0:
            continue
        P = C[rows, : d + 1]
        if d == 1:
            out[rows, 0] = -P[:, 0] / P[:, 1]
        elif d == 2:
            a, b, c = P[:, 2], P[:, 1], P[:, 0]
            disc = b * b - 4 * a * c
            ok = disc >= 0
            sq = np.sqrt(np.where(ok, disc, 0.0))
            q = -0.5 * (b + np.where(b >= 0, sq, -sq))
            r1 = np.where(q != 0, q / a, 0.0)
            r2 = np.where(q != 0, c / np.where(q != 0, q, 1.0), 0.0)
            out[rows, 0] = np.where(ok, r1, np.nan)
            out[rows, 1] = np.where(ok, r2, np.nan)
        else:
            comp = np.zeros((len(rows), d, d))
            comp[:, 1:, :-1] = np.eye(d - 1)
            comp[:, :, -1] = -P[:, :d] / P[:, d:d + 1]
            ev = np.linalg.eigvals(comp)
            real = np.abs(ev.imag) <= 1e-9 * np.maximum(np.abs(ev), 1e-300)
            out[rows, :d] = np.where(real, ev.real, np.nan)
    return out


def column_lengths(C: np.ndarray, t: float, tau: float, lo: float, hi: float) -> np.ndarray:
    """Exact length of {x2 in [lo, hi] : |p_i(x2) - t| <= tau} for each row polynomial p_i."""
    n = C.shape[0]
    if hi <= lo:
        return np.zeros(n)
    up, down = C.copy(), C.copy()
    up[:, 0] -= t + tau
    down[:, 0] -= t - tau
    cuts = np.concatenate([_real_roots(up), _real_roots(down)], axis=1)
    cuts = np.where((cuts > lo) & (cuts < hi), cuts, hi)
    pts = np.sort(np.concatenate([np.full((n, 1), lo), cuts, np.full((n, 1), hi)], axis=1), axis=1)
    mids = 0.5 * (pts[:, 1:] + pts[:, :-1])
    inside = np.abs(_eval_rows(C, mids) - t) <= tau
    return np.sum(np.diff(pts, axis=1) * inside, axis=1)


def _clip(lo: float, hi: float) -> tuple[float, float]:
    return max(lo, OMEGA[0]), min(hi, OMEGA[1])


def intersection_measure(
    phi: LatticePolynomial,
    half_widths: tuple[float, float, float],
    center: tuple[float, float],
    z3: float,
    grid: int = 2048,
    refinements: int = 4,
) -> float:
    """|T(z') cap S| for the box of half-widths (d1, d2, d3) centred at (z', z3), S the graph of 1 + phi."""
    d1, d2, d3 = half_widths
    if grid < 64:
        raise VerificationError("grid must have at least 64 columns")
    x1_lo, x1_hi = _clip(center[0] - d1, center[0] + d1)
    x2_lo, x2_hi = _clip(center[1] - d2, center[1] + d2)
    t = z3 - 1.0
    for _ in range(refinements + 1):
        h = (x1_hi - x1_lo) / grid
        if h <= 0 or x2_hi <= x2_lo:
            return 0.0
        x1 = x1_lo + (np.arange(grid) + 0.5) * h
        lengths = column_lengths(column_polys(phi, x1), t, d3, x2_lo, x2_hi)
        nz = np.nonzero(lengths > 0)[0]
        if len(nz) == 0:
            return 0.0
        span = nz[-1] - nz[0] + 1
        if span >= grid // 4:
            break
        x1_lo, x1_hi = max(x1_lo, x1[nz[0]] - h), min(x1_hi, x1[nz[-1]] + h)
    return float(np.sum(lengths) * h)


def intersection_measure_grid(
    phi: LatticePolynomial,
    half_widths: tuple[float, float, float],
    center: tuple[float, float],
    z3: float,
    grid: int = 1024,
) -> float:
    """Same area by counting cells of a grid x grid tensor midpoint grid (compiled kernel)."""
    d1, d2, d3 = half_widths
    x1_lo, x1_hi = _clip(center[0] - d1, center[0] + d1)
    x2_lo, x2_hi = _clip(center[1] - d2, center[1] + d2)
    if x1_hi <= x1_lo or x2_hi <= x2_lo:
        return 0.0
    coeffs, e1, e2 = phi.to_arrays()
    count = grid_count(
        np.ascontiguousarray(coeffs, dtype=np.float64),
        np.ascontiguousarray(e1, dtype=np.int64),
        np.ascontiguousarray(e2, dtype=np.int64),
        x1_lo, x1_hi, grid, x2_lo, x2_hi, grid, z3 - 1.0, d3,
    )
    cell = (x1_hi - x1_lo) * (x2_hi - x2_lo) / (grid * grid)
    return float(count * cell)


def sublevel_measure(phi: LatticePolynomial, delta: float, grid: int = 2048) -> float:
    """|{x in Omega : |phi(x)| <= delta}|, i.e. the slab box (1, 1, delta) at the origin."""
    return intersection_measure(phi, (1.0, 1.0, delta), (0.0, 0.0), 1.0, grid)


def gradient_bound(phi: LatticePolynomial, samples: int = 65) -> float:
    """max |grad phi| over a samples x samples grid of Omega."""
    g = np.linspace(OMEGA[0], OMEGA[1], samples)
    X1, X2 = np.meshgrid(g, g, indexing="ij")
    d1 = phi.diff(0).evaluate_float(X1, X2)
    d2 = phi.diff(1).evaluate_float(X1, X2)
    return float(np.max(np.hypot(d1, d2)))



def sublevel_prediction(phi: LatticePolynomial) -> Fraction:
    """1/h for finite A-type input; 1/d (Newton distance) otherwise, e.g. for x2^2."""
    try:
        return 1 / classify(phi).h
    except ClassificationError:
        return 1 / newton_distance(polyhedron_of(phi))


def sublevel_exponent(
    phi: LatticePolynomial,
    delta_range: tuple[float, float] = (DELTA_MIN, DELTA_MAX),
    grid: int = 2048,
    tol: float = 0.05,
    count: int = 8,
) -> FitResult:
    """Fit log |{|phi| <= delta}| against log delta."""
    deltas = dyadic_sweep(*delta_range, count)
    values = [sublevel_measure(phi, d, grid) for d in deltas]
    grad = gradient_bound(phi)
    flags = {"gradient_bound_exceeded": grad > GRADIENT_LIMIT}
    return fit_loglog("sublevel", deltas, values, sublevel_prediction(phi), tol, "delta",
                      flags=flags, extra={"max_gradient": grad, "grid": grid})
