"""Numeric checks: sublevel and box-family measures, oscillatory decay fits."""

from .boxes import BoxSamples, box_family_exponent, predicted_threshold, sample_family, zero_crossing
from .fits import FAIL, INCONCLUSIVE, PASS, FitResult, dyadic_sweep, fit_loglog, ols_slope
from .kernels import BACKEND
from .measure import (
    OMEGA,
    gradient_bound,
    intersection_measure,
    intersection_measure_grid,
    sublevel_exponent,
    sublevel_measure,
)
from .oscillatory import corput_decay, stationary_phase_2d_check, oscillatory_integral, oscillatory_J

__all__ = [
    "BACKEND",
    "BoxSamples",
    "FAIL",
    "FitResult",
    "INCONCLUSIVE",
    "OMEGA",
    "PASS",
    "box_family_exponent",
    "corput_decay",
    "dyadic_sweep",
    "fit_loglog",
    "gradient_bound",
    "intersection_measure",
    "intersection_measure_grid",
    "stationary_phase_2d_check",
    "ols_slope",
    "oscillatory_J",
    "oscillatory_integral",
    "predicted_threshold",
    "sample_family",
    "sublevel_exponent",
    "sublevel_measure",
    "zero_crossing",
]
