"""Exact invariants of A-type phases, Newton-Puiseux resolution, and numeric exponent checks."""

__version__ = "0.1.0"

from .classify import ClassificationReport, classify
from .errors import SingscopeError
from .pipeline import Analysis, analyze
from .poly import LatticePolynomial, TruncatedSeries, parse_poly

__all__ = [
    "Analysis",
    "ClassificationReport",
    "LatticePolynomial",
    "SingscopeError",
    "TruncatedSeries",
    "__version__",
    "analyze",
    "classify",
    "parse_poly",
]
