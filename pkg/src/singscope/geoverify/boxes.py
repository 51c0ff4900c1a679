"""Box-family integrals int |T_delta(z') cap S|^p dz' / |T_delta| and their scaling in delta.

Three families are built around the graph S of 1 + phi over Omega:

* k = 0: delta-cubes centred on S (z3 = 1 + phi(z')),
* k = 2: slabs (1, 1, delta) at height 1, whose slice is the sublevel set,
* k = 1: boxes (1, delta^(1 - k2), delta) in line-adapted coordinates, with
  z2 restricted to |z2| <= delta^k2 / 8 and z3 = 1 + phi(0, z2).

Each family scales like a power of delta whose exponent is affine in p; the
p where the fitted exponent crosses zero estimates a necessary threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..classify import ClassificationReport, classify
from ..errors import VerificationError
from ..poly.lattice import LatticePolynomial
from .fits import FAIL, PASS, FitResult, dyadic_sweep, fit_loglog, ols_slope
from .measure import DELTA_MAX, DELTA_MIN, OMEGA, intersection_measure, intersection_measure_grid

CENTERS = 8
CUBE_GRID = 64
OMEGA_AREA = (OMEGA[1] - OMEGA[0]) ** 2


@dataclass(frozen=True)
class BoxSamples:
    """Raw slice measures of one family: ``measures[i]`` holds one value per centre at deltas[i]."""

    k: int
    deltas: np.ndarray
    measures: np.ndarray
    center_area: np.ndarray  # measure of the z'-range at each delta
    box_volume: np.ndarray

    def normalized(self, p: float) -> np.ndarray:
        """The integral over z' of |T cap S|^p divided by |T|, one value per delta."""
        mean = np.mean(self.measures**p, axis=1)
        return self.center_area * mean / self.box_volume


def _centers_grid() -> np.ndarray:
    mids = OMEGA[0] + (np.arange(CENTERS) + 0.5) * (OMEGA[1] - OMEGA[0]) / CENTERS
    return np.array([(a, b) for a in mids for b in mids])


def sample_family(
    phi: LatticePolynomial,
    k: int,
    deltas,
    grid: int = 2048,
    report: ClassificationReport | None = None,
) -> BoxSamples:
    deltas = np.asarray(deltas, dtype=float)
    rows, area, volume = [], [], []
    if k == 0:
        centers = _centers_grid()
        heights = phi.evaluate_float(centers[:, 0], centers[:, 1])
        for d in deltas:
            rows.append([
                intersection_measure_grid(phi, (d, d, d), (z1, z2), 1.0 + t, CUBE_GRID)
                for (z1, z2), t in zip(centers, heights)
            ])
            area.append(OMEGA_AREA)
            volume.append(8 * d**3)
    elif k == 2:
        for d in deltas:
            rows.append([intersection_measure(phi, (1.0, 1.0, d), (0.0, 0.0), 1.0, grid)])
            area.append(OMEGA_AREA)
            volume.append(8 * d)
    elif k == 1:
        report = report or classify(phi)
        kappa = report.kappa_e_adapted
        if kappa is None:
            raise VerificationError("the k = 1 family needs an effective weight (A_plus input)")
        adapted = report.adaptation.phi_la.poly if report.adaptation is not None else phi
        k2 = float(kappa[1])
        for d in deltas:
            half = d**k2 / 8
            zs = -half + (np.arange(CENTERS) + 0.5) * (2 * half / CENTERS)
            lift = adapted.evaluate_float(np.zeros_like(zs), zs)
            rows.append([
                intersection_measure(adapted, (1.0, d ** (1 - k2), d), (0.0, z2), 1.0 + t, grid)
                for z2, t in zip(zs, lift)
            ])
            area.append((OMEGA[1] - OMEGA[0]) * 2 * half)
            volume.append(8 * d ** (1 - k2) * d)
    else:
        raise VerificationError(f"k must be 0, 1 or 2, got {k}")
    return BoxSamples(k, deltas, np.array(rows), np.array(area), np.array(volume))


def predicted_exponent(k: int, p: Fraction, report: ClassificationReport) -> Fraction:
    if k == 0:
        return 2 * p - 3
    if k == 2:
        return p / report.h - 1
    k1, k2 = report.kappa_e_adapted
    return (k1 + 1 - k2) * p - 2 * (1 - k2)


def predicted_threshold(k: int, report: ClassificationReport) -> Fraction:
    if k == 0:
        return Fraction(3, 2)
    if k == 2:
        return report.h
    k1, k2 = report.kappa_e_adapted
    return 2 * (1 - k2) / (k1 + 1 - k2)


def _slope_at(samples: BoxSamples, p: float) -> float:
    vals = samples.normalized(p)
    if np.any(vals <= 0):
        raise VerificationError("empty box intersections: the delta range is too small for the grid")
    slope, _, _ = ols_slope(np.log2(samples.deltas), np.log2(vals))
    return slope


def zero_crossing(samples: BoxSamples, lo: float = 1.0, hi: float = 3.0) -> float:
    """p at which the fitted delta-exponent changes sign (bisection)."""
    f_lo, f_hi = _slope_at(samples, lo), _slope_at(samples, hi)
    if f_lo * f_hi > 0:
        raise VerificationError(f"fitted exponent does not change sign on [{lo}, {hi}]")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        f_mid = _slope_at(samples, mid)
        if (f_mid <= 0) == (f_lo <= 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def box_family_exponent(
    phi: LatticePolynomial,
    k: int,
    p,
    delta_range: tuple[float, float] = (DELTA_MIN, DELTA_MAX),
    grid: int = 2048,
    tol: float = 0.1,
    count: int = 8,
    report: ClassificationReport | None = None,
) -> FitResult:
    """Fitted delta-exponent at p, plus the zero crossing in p.

    The verdict is PASS only when both the exponent at p and the crossing lie
    within ``tol`` of their predictions.
    """
    report = report or classify(phi)
    p = Fraction(p)
    deltas = dyadic_sweep(*delta_range, count)
    samples = sample_family(phi, k, deltas, grid, report)
    pred = predicted_exponent(k, p, report)
    values = samples.normalized(float(p))
    fit = fit_loglog(f"boxes_k{k}", deltas, values, pred, tol, "delta")
    crossing = zero_crossing(samples)
    threshold = predicted_threshold(k, report)
    crossing_ok = abs(crossing - float(threshold)) <= tol
    verdict = fit.verdict
    if verdict == PASS and not crossing_ok:
        verdict = FAIL
    extra = {
        "p": p,
        "zero_crossing": float(crossing),
        "threshold_predicted": threshold,
        "threshold_verdict": PASS if crossing_ok else FAIL,
    }
    return FitResult(fit.label, fit.exponent_hat, fit.stderr, fit.range_kind, fit.value_range,
                     fit.points, pred, tol, verdict,
                     flags={}, extra=extra)
