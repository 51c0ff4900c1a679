"""Least-squares slopes on log-log data and the resulting verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import VerificationError

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"
MIN_POINTS = 6


@dataclass(frozen=True)
class FitResult:
    label: str
    exponent_hat: float
    stderr: float
    range_kind: str
    value_range: tuple[float, float]
    points: list[tuple[float, float]]
    predicted: Fraction | float
    tolerance: float
    verdict: str
    mode: str = "equal"
    flags: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        pred = self.predicted
        if isinstance(pred, Fraction):
            pred = {"exact": f"{pred.numerator}/{pred.denominator}"}
        else:
            pred = {"fitted": float(pred)}
        return {
            "label": self.label,
            "exponent_hat": {"fitted": self.exponent_hat},
            "stderr": {"fitted": self.stderr},
            "range_kind": self.range_kind,
            "range": [self.value_range[0], self.value_range[1]],
            "points": [[x, y] for x, y in self.points],
            "predicted": pred,
            "tolerance": self.tolerance,
            "mode": self.mode,
            "verdict": self.verdict,
            "flags": dict(self.flags),
            "extra": {k: _jsonable(v) for k, v in self.extra.items()},
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return {"exact": f"{v.numerator}/{v.denominator}"}
    if isinstance(v, (np.floating, float)):
        return {"fitted": float(v)}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, np.integer):
        return int(v)
    return v


def ols_slope(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Slope, intercept and the slope's standard error."""
    n = len(x)
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0:
        raise VerificationError("degenerate fit: all abscissae coincide")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    dof = max(n - 2, 1)
    stderr = float(np.sqrt(np.sum(resid**2) / dof / sxx))
    return slope, intercept, stderr


def verdict_for(hat: float, stderr: float, predicted, tolerance: float, mode: str) -> str:
    """Two-sided modes need stderr <= tolerance; one-sided bounds must hold by two stderrs."""
    pred = float(predicted)
    if mode == "at_most":
        if hat + 2 * stderr <= pred + tolerance:
            return PASS
        if hat - 2 * stderr > pred + tolerance:
            return FAIL
        return INCONCLUSIVE
    if stderr > tolerance:
        return INCONCLUSIVE
    return PASS if abs(hat - pred) <= tolerance else FAIL


def fit_loglog(
    label: str,
    xs,
    ys,
    predicted,
    tolerance: float,
    range_kind: str,
    mode: str = "equal",
    flags: dict | None = None,
    extra: dict | None = None,
) -> FitResult:
    """Fit log2(y) against log2(x) by ordinary least squares."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) < MIN_POINTS:
        raise VerificationError(f"{label}: only {len(xs)} usable points, need {MIN_POINTS}")
    if np.any(ys <= 0) or np.any(xs <= 0):
        raise VerificationError(f"{label}: non-positive values cannot be fitted on a log scale")
    lx, ly = np.log2(xs), np.log2(ys)
    slope, _, stderr = ols_slope(lx, ly)
    verdict = verdict_for(slope, stderr, predicted, tolerance, mode)
    return FitResult(
        label, slope, stderr, range_kind, (float(xs.min()), float(xs.max())),
        [(float(a), float(b)) for a, b in zip(lx, ly)], predicted, tolerance, verdict, mode,
        flags or {}, extra or {},
    )


def dyadic_sweep(lo: float, hi: float, count: int = 8) -> np.ndarray:
    """``count`` values evenly spaced in log2 between lo and hi."""
    if not 0 < lo < hi:
        raise VerificationError("sweep range must satisfy 0 < lo < hi")
    if count < MIN_POINTS:
        raise VerificationError(f"a sweep needs at least {MIN_POINTS} points")
    return 2.0 ** np.linspace(np.log2(lo), np.log2(hi), count)
