"""Exact polynomial and truncated-series arithmetic plus the expression parser."""

from .lattice import LatticePolynomial, format_polynomial, grlex_key
from .parse import parse_poly
from .series import (
    TruncatedSeries,
    as_series,
    compose,
    shear_substitute,
    solve_implicit,
)


def taylor_support(p: LatticePolynomial) -> set[tuple[int, int]]:
    """Exponent pairs carrying a nonzero coefficient."""
    return p.support()


__all__ = [
    "LatticePolynomial",
    "TruncatedSeries",
    "as_series",
    "compose",
    "format_polynomial",
    "grlex_key",
    "parse_poly",
    "shear_substitute",
    "solve_implicit",
    "taylor_support",
]
