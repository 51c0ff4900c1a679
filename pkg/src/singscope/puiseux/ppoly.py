"""Bivariate polynomials in (z, s) with integer z-powers and rational s-powers.

Coefficients stay exact (Fraction) as long as every shift coefficient is
rational; otherwise they become Python complex numbers.  A truncated input
carries a validity functional: a term z^k s^e is known exactly when
``e + weight * k <= bound``, and nothing is known above that line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Union

import numpy as np

from ..errors import PuiseuxError
from ..newton import NewtonPolyhedron, newton_polyhedron
from ..poly.lattice import LatticePolynomial
from ..poly.series import TruncatedSeries

Number = Union[Fraction, complex]
Key = tuple[int, Fraction]

# relative size below which a numerically computed coefficient counts as cancelled
CANCEL_TOL = 1e-10


def _is_exact(c) -> bool:
    return isinstance(c, (Fraction, int))


@dataclass(frozen=True)
class Validity:
    """Terms with e + weight*k > bound are unknown; bound None means exact."""

    bound: Fraction | None
    weight: Fraction = Fraction(1)

    @property
    def exact(self) -> bool:
        return self.bound is None

    def knows(self, k, e) -> bool:
        return self.bound is None or e + self.weight * k <= self.bound

    def limit(self, k) -> Fraction | None:
        """Largest certified s-exponent in column k."""
        return None if self.bound is None else self.bound - self.weight * k

    def after_shift(self, slope: Fraction) -> "Validity":
        if self.bound is None or slope >= self.weight:
            return self
        return Validity(slope * self.bound / self.weight, slope)


@dataclass(frozen=True)
class PuiseuxPoly:
    terms: dict[Key, Number]
    validity: Validity = field(default_factory=lambda: Validity(None))
    # relative residual of coefficients that cancelled in the last shift
    cancelled: dict[Key, float] = field(default_factory=dict, compare=False)

    @classmethod
    def from_series(cls, series) -> "PuiseuxPoly":
        if isinstance(series, LatticePolynomial):
            series = TruncatedSeries.exact(series)
        terms = {(i, Fraction(j)): c for (i, j), c in series.poly.terms.items()}
        v = series.valid_order
        return cls(terms, Validity(None if v is None else Fraction(v)))

    @classmethod
    def from_terms(cls, items: Iterable[tuple[int, object, Number]]) -> "PuiseuxPoly":
        acc: dict[Key, Number] = {}
        for k, e, c in items:
            key = (int(k), Fraction(e))
            acc[key] = acc.get(key, 0) + c
        return cls({k: c for k, c in acc.items() if c != 0})

    @property
    def is_exact(self) -> bool:
        return self.validity.exact

    @property
    def numeric(self) -> bool:
        return any(not _is_exact(c) for c in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, k: int, e) -> Number:
        return self.terms.get((k, Fraction(e)), Fraction(0))

    def support(self) -> set[tuple[int, Fraction]]:
        return set(self.terms)

    def degree_z(self) -> int:
        return max(k for k, _ in self.terms)

    def polyhedron(self, max_column: int | None = None) -> NewtonPolyhedron:
        pts = [m for m in self.terms if max_column is None or m[0] <= max_column]
        if not pts:
            raise PuiseuxError("empty support has no Newton polyhedron")
        return newton_polyhedron(pts)

    def scale_check(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    def __mul__(self, other: "PuiseuxPoly") -> "PuiseuxPoly":
        if not (self.is_exact and other.is_exact):
            raise PuiseuxError("products are only formed for exact inputs")
        acc: dict[Key, Number] = {}
        for (k1, e1), c1 in self.terms.items():
            for (k2, e2), c2 in other.terms.items():
                key = (k1 + k2, e1 + e2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return PuiseuxPoly({k: c for k, c in acc.items() if c != 0})

    def divide_monomial(self, k0: int, e0: Fraction) -> "PuiseuxPoly":
        """Divide by z^k0 s^e0 (every term must be divisible)."""
        terms = {}
        for (k, e), c in self.terms.items():
            if k < k0 or e < e0:
                raise PuiseuxError("monomial does not divide the polynomial")
            terms[(k - k0, e - e0)] = c
        v = self.validity
        bound = None if v.bound is None else v.bound - e0 - v.weight * k0
        return PuiseuxPoly(terms, Validity(bound, v.weight))

    def shift(self, c: Number, slope) -> "PuiseuxPoly":
        """Substitute z -> z + c*s^slope; drops what falls outside the validity region."""
        slope = Fraction(slope)
        if slope <= 0:
            raise PuiseuxError("shift exponent must be positive")
        exact = _is_exact(c) and not self.numeric
        if not exact:
            c = complex(c)
        new_validity = self.validity.after_shift(slope)
        acc: dict[Key, Number] = {}
        mass: dict[Key, float] = {}
        cpow = [Fraction(1) if exact else 1.0 + 0j]
        for (i, e), a in self.terms.items():
            while len(cpow) <= i:
                cpow.append(cpow[-1] * c)
            for k in range(i + 1):
                ee = e + slope * (i - k)
                if not new_validity.knows(k, ee):
                    continue
                val = a * comb(i, k) * cpow[i - k]
                key = (k, ee)
                acc[key] = acc.get(key, 0) + val
                if not exact:
                    mass[key] = mass.get(key, 0.0) + abs(val)
        terms: dict[Key, Number] = {}
        cancelled: dict[Key, float] = {}
        for key, val in acc.items():
            if exact:
                if val != 0:
                    terms[key] = val
                continue
            ratio = abs(val) / mass[key] if mass[key] else 0.0
            if ratio <= CANCEL_TOL:
                cancelled[key] = ratio
            else:
                terms[key] = val
        return PuiseuxPoly(terms, new_validity, cancelled)

    def principal_part(self, kappa) -> "PuiseuxPoly":
        k1, k2 = Fraction(kappa[0]), Fraction(kappa[1])
        low = min(k1 * k + k2 * e for k, e in self.terms)
        return PuiseuxPoly({m: c for m, c in self.terms.items() if k1 * m[0] + k2 * m[1] == low})

    def on_line(self, kappa) -> list[tuple[Key, Number]]:
        """Terms on the line kappa . t = 1, sorted by z-power."""
        k1, k2 = Fraction(kappa[0]), Fraction(kappa[1])
        return sorted(
            ((m, c) for m, c in self.terms.items() if k1 * m[0] + k2 * m[1] == 1),
            key=lambda t: t[0][0],
        )

    def evaluate(self, z, s) -> np.ndarray:
        """Numeric value at complex/real z and positive s (broadcasting)."""
        z = np.asarray(z, dtype=complex)
        s = np.asarray(s, dtype=float)
        out = np.zeros(np.broadcast(z, s).shape, dtype=complex)
        for (k, e), c in self.terms.items():
            out = out + complex(c) * z**k * s ** float(e)
        return out

    def to_lattice(self, vars: tuple[str, str] = ("z", "s")) -> LatticePolynomial:
        terms = {}
        for (k, e), c in self.terms.items():
            if e.denominator != 1 or not _is_exact(c):
                raise PuiseuxError("not a lattice polynomial with rational coefficients")
            terms[(k, int(e))] = Fraction(c)
        return LatticePolynomial(terms, vars)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (k, e), c in sorted(self.terms.items(), key=lambda t: (t[0][1] + t[0][0], -t[0][0])):
            parts.append(f"({_fmt_number(c)})*z^{k}*s^{e}")
        return " + ".join(parts)


def _fmt_number(c: Number) -> str:
    if _is_exact(c):
        return str(Fraction(c))
    c = complex(c)
    return f"{c.real:.12g}{c.imag:+.12g}j"


def phase_second_derivative(phi1) -> TruncatedSeries:
    """Phi = d^2/dx1^2 of the reduced phase, renamed to (z, s)."""
    if not isinstance(phi1, TruncatedSeries):
        phi1 = TruncatedSeries.exact(phi1)
    return phi1.diff(0, 2).with_vars(("z", "s"))
