"""Decay rates of one- and two-dimensional oscillatory integrals.

All integrals use composite Gauss-Legendre rules whose panel count scales with
the phase frequency; an 8-node result is accepted only when a 16-node rule on
the same panels agrees, otherwise the panel count is doubled.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import VerificationError
from ..poly.lattice import LatticePolynomial
from ..poly.series import TruncatedSeries
from .fits import FitResult, dyadic_sweep, fit_loglog
from .kernels import osc_sum

LAMBDA_MIN = 2.0**6
LAMBDA_MAX = 2.0**20
NOISE_FLOOR = 1e-11
AGREEMENT = 1e-10
MAX_DOUBLINGS = 4
PANEL_BLOCK = 1 << 15
NONSTATIONARY_RANGE = (1.0, 2.0**5)


def bump(y: np.ndarray) -> np.ndarray:
    """exp(1 - 1/(1 - y^2)) on (-1, 1), zero outside; equals 1 at y = 0."""
    out = np.zeros_like(y, dtype=float)
    inside = np.abs(y) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - y[inside] ** 2))
    return out


def _poly_eval(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    for c in coeffs[::-1]:
        out = out * x + c
    return out


def _derivative(coeffs: np.ndarray, times: int = 1) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    for _ in range(times):
        c = c[1:] * np.arange(1, len(c)) if len(c) > 1 else np.zeros(1)
    return c


def _panel_rule(lo: float, hi: float, panels: int, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    g, w = np.polynomial.legendre.leggauss(nodes)
    h = (hi - lo) / panels
    left = lo + h * np.arange(panels)
    x = (left[:, None] + 0.5 * h * (g[None, :] + 1)).ravel()
    wt = np.tile(0.5 * h * w, panels)
    return x, wt


def _panel_sum(phase, lam, amplitude, lo, hi, panels, nodes) -> tuple[complex, float]:
    """Composite rule evaluated in blocks of panels to bound memory; also returns the L1 mass."""
    h = (hi - lo) / panels
    total, mass = 0j, 0.0
    for first in range(0, panels, PANEL_BLOCK):
        count = min(PANEL_BLOCK, panels - first)
        x, w = _panel_rule(lo + first * h, lo + (first + count) * h, count, nodes)
        a = np.ascontiguousarray(amplitude(x))
        total += osc_sum(x, w, a, phase, lam)
        mass += float(np.sum(w * np.abs(a)))
    return total, mass


def oscillatory_integral(
    phase: np.ndarray,
    lam: float,
    amplitude,
    lo: float,
    hi: float,
) -> complex:
    """int_lo^hi exp(i lam phase(x)) amplitude(x) dx with ascending phase coefficients."""
    phase = np.ascontiguousarray(phase, dtype=np.float64)
    probe = np.linspace(lo, hi, 1025)
    speed = float(np.max(np.abs(_poly_eval(_derivative(phase), probe))))
    panels = int(math.ceil(lam * speed * (hi - lo) / 2)) + 16
    for _ in range(MAX_DOUBLINGS + 1):
        coarse, _ = _panel_sum(phase, lam, amplitude, lo, hi, panels, 8)
        fine, l1 = _panel_sum(phase, lam, amplitude, lo, hi, panels, 16)
        if abs(coarse - fine) <= AGREEMENT * max(l1, 1e-300):
            return fine
        panels *= 2
    raise VerificationError(f"oscillatory quadrature did not converge at lambda = {lam:g}")


def univariate_phase(poly: LatticePolynomial | Sequence) -> np.ndarray:
    """Ascending float coefficients of a one-variable phase.

    A two-variable polynomial is restricted to the line x1 = 0 unless it only
    involves x1, in which case x2 = 0 is used.
    """
    if isinstance(poly, TruncatedSeries):
        poly = poly.poly
    if not isinstance(poly, LatticePolynomial):
        return np.asarray([float(c) for c in poly], dtype=float)
    if poly.degree_in(1) == 0:
        coeffs = poly.univariate(0)
    else:
        coeffs = poly.filter(lambda mono: mono[0] == 0).univariate(1)
    return np.asarray([float(c) for c in coeffs], dtype=float)


def corput_decay(
    phase,
    m: int,
    lambda_range: tuple[float, float] = (LAMBDA_MIN, LAMBDA_MAX),
    tol: float = 0.05,
    count: int = 8,
) -> FitResult:
    """Decay of |int_0^1 exp(i lam phase) chi| in lam against -1/m.

    chi is the bump exp(1 - 1/(1 - x^2)), so only the endpoint x = 0 and
    stationary points contribute.  For m = 1 the prediction is an upper bound.
    """
    if m < 1:
        raise VerificationError("derivative order m must be positive")
    coeffs = univariate_phase(phase)
    grid = np.linspace(0.0, 1.0, 1025)
    lowest = float(np.min(np.abs(_poly_eval(_derivative(coeffs, m), grid))))
    if lowest < 1 - 1e-12:
        raise VerificationError(f"|phase^({m})| >= 1 fails on [0, 1] (minimum {lowest:.3g})")
    lams = dyadic_sweep(*lambda_range, count)
    values = np.array([abs(oscillatory_integral(coeffs, lam, bump, 0.0, 1.0)) for lam in lams])
    l1 = float(np.sum(bump(grid)) / 1024)
    keep = values > NOISE_FLOOR * l1
    flags = {"noise_floor_dropped": int(np.count_nonzero(~keep))} if not keep.all() else {}
    mode = "at_most" if m == 1 else "equal"
    return fit_loglog(f"corput_m{m}", lams[keep], values[keep], Fraction(-1, m), tol, "lambda",
                      mode=mode, flags=flags)


def _as_poly(phi1) -> LatticePolynomial:
    return phi1.poly if isinstance(phi1, TruncatedSeries) else phi1


def dominant_vertex(Phi_support, j: int, k: int) -> tuple[int, Fraction]:
    """(B, A) minimizing k A + j B over the support of Phi = d^2 phi1 / dx1^2."""
    best = min(Phi_support, key=lambda ba: (k * ba[1] + j * ba[0], ba))
    return best


def oscillatory_J(
    phi1,
    region: tuple[int, int],
    lambda_d_range: tuple[float, float] = (4.0, 2.0**12),
    stationary: bool = True,
    tol: float | None = None,
    count: int = 8,
    nonstationary_range: tuple[float, float] | None = None,
) -> FitResult:
    """Decay in lam of J(lam, s) = int exp(-i lam (phi1(x1, s2) + s1 x1)) eta(2^j x1) dx1.

    s2 = 2^-k, eta is a bump on [1/2, 2]; s1 puts the stationary point at
    x1 = 2^-j (or, with ``stationary=False``, at 4 * 2^-j, outside the window).
    lam runs over lam * d in ``lambda_d_range`` with d = 2^(-kA - j(B + 2)) for
    the dominant vertex (B, A) of the second x1-derivative.  Without a
    stationary point lam instead runs over lam * v in ``nonstationary_range``,
    v the least phase speed on the window, where the decay is still resolvable.
    """
    j, k = region
    poly = _as_poly(phi1)
    x_scale, s2 = 2.0**-j, 2.0**-k
    second = poly.diff(0, 2)
    support = [(i, e) for (i, e) in second.terms]
    if not support:
        raise VerificationError("phi1 is at most linear in x1; J has no oscillatory scale")
    B, A = dominant_vertex(support, j, k)
    d = 2.0 ** (-k * A - j * (B + 2))

    # phase as a polynomial in t = 2^j x1
    deg = poly.degree_in(0)
    coeffs = np.zeros(deg + 1)
    for (i, e), c in poly.terms.items():
        coeffs[i] += float(c) * s2**e * x_scale**i
    coeffs[0] = 0.0
    anchor = 1.0 if stationary else 4.0
    slope_at_anchor = float(_poly_eval(_derivative(coeffs), np.array([anchor]))[0])
    coeffs[1] -= slope_at_anchor

    def eta(t):
        return bump((t - 1.25) / 0.75)

    if stationary:
        lams = dyadic_sweep(*lambda_d_range, count) / d
    else:
        # no stationary point: scale lambda by the slowest phase speed in the window instead
        probe = np.linspace(0.5, 2.0, 1025)
        speed = float(np.min(np.abs(_poly_eval(_derivative(coeffs), probe))))
        lams = dyadic_sweep(*(nonstationary_range or NONSTATIONARY_RANGE), count) / speed
    values = np.array([x_scale * abs(oscillatory_integral(-coeffs, lam, eta, 0.5, 2.0)) for lam in lams])
    l1 = x_scale * 0.75 * float(np.sum(bump(np.linspace(-1, 1, 2049))) / 1024)
    keep = values > NOISE_FLOOR * l1
    flags = {"noise_floor_dropped": int(np.count_nonzero(~keep))} if not keep.all() else {}
    if stationary:
        predicted, tol = Fraction(-1, 2), 0.07 if tol is None else tol
    else:
        predicted, tol = Fraction(-1), 0.05 if tol is None else tol
    envelope = values[keep] * (lams[keep] * d) ** 0.5 / x_scale
    extra = {
        "region": [j, k],
        "vertex": [int(B), Fraction(A)],
        "d": float(d),
        "envelope_constant": float(np.mean(envelope)) if len(envelope) else float("nan"),
        "stationary": stationary,
    }
    return fit_loglog(f"oscillatory_J_{j}_{k}", lams[keep], values[keep], predicted, tol, "lambda",
                      mode="at_most", flags=flags, extra=extra)


def stationary_phase_2d_check(
    N_values=None,
    u: float = 0.2,
    tol: float = 0.05,
) -> FitResult:
    """Two-dimensional stationary phase for exp(i N (x^2 + eta (u - x))) times bumps in x and eta.

    The single non-degenerate critical point (x, eta) = (u, 2u) gives |I| ~ N^-1.
    """
    if N_values is None:
        N_values = 2.0 ** np.arange(3, 9)
    N_values = np.asarray(N_values, dtype=float)
    values = []
    for N in N_values:
        panels = int(math.ceil(N * 3.0)) + 16
        x, wx = _panel_rule(-1.0, 1.0, panels, 8)
        e, we = _panel_rule(-1.0, 1.0, panels, 8)
        ax, ae = bump(x) * wx, bump(e) * we
        total = 0j
        for start in range(0, len(e), 256):
            E = e[start:start + 256, None]
            ph = x[None, :] ** 2 + E * (u - x[None, :])
            total += np.sum(ae[start:start + 256, None] * ax[None, :] * np.exp(1j * N * ph))
        values.append(abs(total))
    return fit_loglog("stationary_phase_2d", N_values, values, Fraction(-1), tol, "N")
