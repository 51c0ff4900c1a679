"""Truncated bivariate power series with a certified total-degree validity."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import PreconditionError, SeriesValidityError
from .lattice import DEFAULT_VARS, LatticePolynomial

EXACT = None  # validity marker: no unknown tail at all


def _min_valid(*orders: int | None) -> int | None:
    finite = [o for o in orders if o is not None]
    return min(finite) if finite else None


class TruncatedSeries:
    """Known terms up to total degree ``valid_order``; the tail beyond it is unknown.

    ``valid_order is None`` means the series is an exact polynomial.
    """

    __slots__ = ("poly", "valid_order")

    def __init__(self, poly: LatticePolynomial, valid_order: int | None = EXACT):
        if valid_order is not None:
            if valid_order < 0:
                raise SeriesValidityError("series validity dropped below degree 0")
            poly = poly.truncate(valid_order)
        self.poly = poly
        self.valid_order = valid_order

    @classmethod
    def exact(cls, poly: LatticePolynomial) -> "TruncatedSeries":
        return cls(poly, EXACT)

    @classmethod
    def of(cls, value, valid_order: int | None = EXACT) -> "TruncatedSeries":
        if isinstance(value, TruncatedSeries):
            return value if valid_order is None else value.truncate(valid_order)
        return cls(value, valid_order)

    @property
    def vars(self) -> tuple[str, str]:
        return self.poly.vars

    @property
    def is_exact(self) -> bool:
        return self.valid_order is None

    def truncate(self, order: int) -> "TruncatedSeries":
        if self.valid_order is not None and order > self.valid_order:
            raise SeriesValidityError(
                f"cannot certify order {order}; series is valid only to {self.valid_order}"
            )
        return TruncatedSeries(self.poly, order)

    def coeff(self, i: int, j: int) -> Fraction:
        if self.valid_order is not None and i + j > self.valid_order:
            raise SeriesValidityError(
                f"coefficient of degree {i + j} requested; series is valid only to {self.valid_order}"
            )
        return self.poly.coeff(i, j)

    def valuation(self) -> int | None:
        """Lowest certified degree; if no known term, the first uncertified degree."""
        order = self.poly.order()
        if order is not None:
            return order
        return None if self.valid_order is None else self.valid_order + 1

    def is_certified_zero(self) -> bool:
        return self.poly.is_zero() and self.valid_order is None

    # arithmetic
    def __add__(self, other) -> "TruncatedSeries":
        other = _lift(other, self.vars)
        v = _min_valid(self.valid_order, other.valid_order)
        return TruncatedSeries(self.poly + other.poly, v)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self.poly, self.valid_order)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-_lift(other, self.vars))

    def __rsub__(self, other) -> "TruncatedSeries":
        return _lift(other, self.vars) + (-self)

    def product_validity(self, other: "TruncatedSeries") -> int | None:
        a, b = self.valid_order, other.valid_order
        if a is None and b is None:
            return None
        cands = []
        if a is not None:
            vb = other.valuation()
            if vb is not None:
                cands.append(a + vb)
        if b is not None:
            va = self.valuation()
            if va is not None:
                cands.append(b + va)
        if not cands:
            return None  # one factor is exactly zero
        return min(cands)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.poly * other, self.valid_order)
        other = _lift(other, self.vars)
        v = self.product_validity(other)
        return TruncatedSeries(self.poly.mul_truncated(other.poly, v), v)

    __rmul__ = __mul__

    def mul_capped(self, other: "TruncatedSeries", cap: int) -> "TruncatedSeries":
        """Product certified only to min(propagated validity, cap)."""
        v = self.product_validity(other)
        v = cap if v is None else min(v, cap)
        return TruncatedSeries(self.poly.mul_truncated(other.poly, v), v)

    def __pow__(self, k: int) -> "TruncatedSeries":
        result = TruncatedSeries(LatticePolynomial.constant(1, self.vars))
        for _ in range(k):
            result = result * self
        return result

    def diff(self, index: int, times: int = 1) -> "TruncatedSeries":
        v = None if self.valid_order is None else self.valid_order - times
        if v is not None and v < 0:
            raise SeriesValidityError("derivative exceeds the certified order")
        return TruncatedSeries(self.poly.diff(index, times), v)

    def cap(self, order: int) -> "TruncatedSeries":
        """Deliberately forget terms above ``order`` (never raises)."""
        v = order if self.valid_order is None else min(order, self.valid_order)
        return TruncatedSeries(self.poly, v)

    def with_vars(self, vars: tuple[str, str]) -> "TruncatedSeries":
        return TruncatedSeries(self.poly.with_vars(vars), self.valid_order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.valid_order == other.valid_order and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.poly, self.valid_order))

    def __str__(self) -> str:
        tail = "" if self.valid_order is None else f" + O(deg {self.valid_order + 1})"
        return f"{self.poly}{tail}"

    def __repr__(self) -> str:
        return f"TruncatedSeries({self})"


def _lift(value, vars: Sequence[str]) -> TruncatedSeries:
    if isinstance(value, TruncatedSeries):
        return value
    if isinstance(value, LatticePolynomial):
        return TruncatedSeries(value)
    if isinstance(value, (int, Fraction)):
        return TruncatedSeries(LatticePolynomial.constant(value, tuple(vars)))
    raise TypeError(f"cannot combine series with {type(value).__name__}")


def as_series(value) -> TruncatedSeries:
    if isinstance(value, TruncatedSeries):
        return value
    if isinstance(value, LatticePolynomial):
        return TruncatedSeries(value)
    raise TypeError(f"expected a polynomial or series, got {type(value).__name__}")


def compose(
    f: TruncatedSeries | LatticePolynomial,
    sub1: TruncatedSeries | LatticePolynomial,
    sub2: TruncatedSeries | LatticePolynomial,
    cap: int | None = None,
) -> TruncatedSeries:
    """f(sub1, sub2) where both substitutions vanish at the origin.

    The validity of the result is the propagated minimum; ``cap`` bounds the
    work (and the certified order) when every input is exact.
    """
    f = as_series(f)
    s1 = as_series(sub1)
    s2 = as_series(sub2)
    vars = s1.vars
    for s in (s1, s2):
        if s.poly.coeff(0, 0):
            raise PreconditionError("substituted series must vanish at the origin")
    v1 = s1.valuation()
    v2 = s2.valuation()
    vmin = min(v for v in (v1, v2) if v is not None) if (v1 is not None or v2 is not None) else None

    # validity contributed by the unknown tail of f
    bounds: list[int] = []
    if f.valid_order is not None and vmin is not None:
        bounds.append((f.valid_order + 1) * vmin - 1)
    if cap is not None:
        bounds.append(cap)
    # validity of each known monomial s1^i s2^j
    for (i, j) in f.poly.terms:
        for s, e, other_val, other_e in ((s1, i, v2, j), (s2, j, v1, i)):
            if e and s.valid_order is not None:
                rest = (e - 1) * (s.valuation() or 0) + (other_val or 0) * other_e
                bounds.append(s.valid_order + rest)
    target = min(bounds) if bounds else None

    def powers(s: TruncatedSeries, top: int) -> list[LatticePolynomial]:
        out = [LatticePolynomial.constant(1, vars)]
        for _ in range(top):
            out.append(out[-1].mul_truncated(s.poly, target))
        return out

    p1 = powers(s1, f.poly.degree_in(0) if f.poly else 0)
    p2 = powers(s2, f.poly.degree_in(1) if f.poly else 0)
    acc: dict = {}
    for (i, j), c in f.poly.terms.items():
        if target is not None and vmin is not None and (i + j) * vmin > target:
            continue
        prod = p1[i].mul_truncated(p2[j], target) if i and j else (p1[i] if j == 0 else p2[j])
        for m, v in prod.terms.items():
            acc[m] = acc.get(m, 0) + c * v
    result = LatticePolynomial(acc, vars)
    return TruncatedSeries(result, target)


def shear_substitute(p, a, cap: int | None = None) -> TruncatedSeries:
    """p(y1 + a(y2), y2) for a series a in the second variable with a(0) = 0."""
    p = as_series(p)
    a = as_series(a)
    if any(m[0] for m in a.poly.terms):
        raise PreconditionError("shear must depend on the second variable only")
    if a.poly.coeff(0, 0):
        raise PreconditionError("shear must vanish at the origin")
    vars = p.vars
    y1 = TruncatedSeries(LatticePolynomial.monomial(1, 0, 1, vars))
    y2 = TruncatedSeries(LatticePolynomial.monomial(0, 1, 1, vars))
    a = a.with_vars(vars)
    result = compose(p, y1 + a, y2, cap=cap)
    if result.valid_order is not None and result.valid_order < 1:
        raise SeriesValidityError("order underflow: shear result is certified below degree 1")
    return result


def solve_implicit(F, order: int) -> TruncatedSeries:
    """Series u(v) with u(0) = 0 and F(u(v), v) = O(v^(order+1)).

    F is a series in (u, v) stored with u in the first slot; the solution is
    returned as a series in the second slot only.
    """
    F = as_series(F)
    vars = F.vars
    if F.poly.coeff(0, 0):
        raise PreconditionError("F(0,0) must vanish")
    slope = F.poly.coeff(1, 0)
    if not slope:
        raise PreconditionError("the u-derivative of F must not vanish at the origin")
    if F.valid_order is not None and order > F.valid_order:
        raise SeriesValidityError(
            f"requested order {order} exceeds the validity {F.valid_order} of F"
        )
    # F(u, v) = slope*u + G(u, v): iterate u <- u - F(u, v)/slope, one degree at a time
    u = LatticePolynomial.zero(vars)
    v_only = LatticePolynomial.monomial(0, 1, 1, vars)
    for degree in range(1, order + 1):
        residual = compose(F.poly, u, v_only, cap=degree).poly
        step = residual.filter(lambda m, d=degree: m[0] + m[1] == d)
        u = u - step * (1 / Fraction(slope))
    check = compose(F.poly, u, v_only, cap=order).poly
    if not check.is_zero():
        raise SeriesValidityError("implicit solution failed its residual check")
    return TruncatedSeries(u, order)
