"""Exact sparse bivariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

Monomial = tuple[int, int]
DEFAULT_VARS = ("x1", "x2")


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not allowed in exact polynomials")
    return Fraction(value)


def grlex_key(mono: Monomial) -> tuple[int, int]:
    """Sort key: ascending total degree, then descending first exponent."""
    return (mono[0] + mono[1], -mono[0])


class LatticePolynomial:
    """Immutable map from exponent pairs to nonzero rational coefficients."""

    __slots__ = ("_terms", "vars", "_hash")

    def __init__(
        self,
        terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]] | None = None,
        vars: tuple[str, str] = DEFAULT_VARS,
    ):
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in items:
            i, j = mono
            if not (isinstance(i, int) and isinstance(j, int)) or i < 0 or j < 0:
                raise ValueError(f"exponents must be non-negative integers, got {mono!r}")
            c = _as_fraction(coeff)
            if c:
                key = (i, j)
                total = clean.get(key, 0) + c
                if total:
                    clean[key] = total
                else:
                    clean.pop(key, None)
        self._terms = clean
        self.vars = tuple(vars)
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction], vars: tuple[str, str]) -> "LatticePolynomial":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.vars = vars
        obj._hash = None
        return obj

    # construction helpers
    @classmethod
    def zero(cls, vars: tuple[str, str] = DEFAULT_VARS) -> "LatticePolynomial":
        return cls._raw({}, tuple(vars))

    @classmethod
    def constant(cls, c, vars: tuple[str, str] = DEFAULT_VARS) -> "LatticePolynomial":
        return cls({(0, 0): c}, vars)

    @classmethod
    def monomial(cls, i: int, j: int, c=1, vars: tuple[str, str] = DEFAULT_VARS) -> "LatticePolynomial":
        return cls({(i, j): c}, vars)

    @classmethod
    def var(cls, index: int, vars: tuple[str, str] = DEFAULT_VARS) -> "LatticePolynomial":
        return cls.monomial(1 - index, index, 1, vars) if index in (0, 1) else _bad_index(index)

    # basic access
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self._terms, key=grlex_key))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def support(self) -> set[Monomial]:
        return set(self._terms)

    def total_degree(self) -> int:
        return max((i + j for i, j in self._terms), default=-1)

    def order(self) -> int | None:
        """Lowest total degree present, None for the zero polynomial."""
        return min((i + j for i, j in self._terms), default=None)

    def degree_in(self, index: int) -> int:
        return max((m[index] for m in self._terms), default=-1)

    def order_in(self, index: int) -> int | None:
        return min((m[index] for m in self._terms), default=None)

    def with_vars(self, vars: tuple[str, str]) -> "LatticePolynomial":
        return LatticePolynomial._raw(self._terms, tuple(vars))

    # ring operations
    def _coerce(self, other) -> "LatticePolynomial":
        if isinstance(other, LatticePolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return LatticePolynomial.constant(other, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LatticePolynomial._raw(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return LatticePolynomial._raw({m: -c for m, c in self._terms.items()}, self.vars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return LatticePolynomial.zero(self.vars)
            return LatticePolynomial._raw({m: v * c for m, v in self._terms.items()}, self.vars)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.mul_truncated(other, None)

    __rmul__ = __mul__

    def mul_truncated(self, other: "LatticePolynomial", max_degree: int | None) -> "LatticePolynomial":
        """Product keeping only terms of total degree <= max_degree (all if None)."""
        out: dict[Monomial, Fraction] = {}
        right = sorted(other._terms.items(), key=lambda kv: kv[0][0] + kv[0][1])
        for (i1, j1), c1 in self._terms.items():
            d1 = i1 + j1
            for (i2, j2), c2 in right:
                if max_degree is not None and d1 + i2 + j2 > max_degree:
                    break
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return LatticePolynomial._raw({m: c for m, c in out.items() if c}, self.vars)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = LatticePolynomial.constant(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LatticePolynomial.constant(other, self.vars)
        if not isinstance(other, LatticePolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self.items()))
        return self._hash

    # calculus and restructuring
    def diff(self, index: int, times: int = 1) -> "LatticePolynomial":
        out: dict[Monomial, Fraction] = {}
        for (i, j), c in self._terms.items():
            e = (i, j)[index]
            if e < times:
                continue
            factor = 1
            for t in range(times):
                factor *= e - t
            key = (i - times, j) if index == 0 else (i, j - times)
            out[key] = c * factor
        return LatticePolynomial._raw(out, self.vars)

    def filter(self, keep: Callable[[Monomial], bool]) -> "LatticePolynomial":
        return LatticePolynomial._raw({m: c for m, c in self._terms.items() if keep(m)}, self.vars)

    def truncate(self, max_degree: int) -> "LatticePolynomial":
        return self.filter(lambda m: m[0] + m[1] <= max_degree)

    def swap(self) -> "LatticePolynomial":
        return LatticePolynomial._raw({(j, i): c for (i, j), c in self._terms.items()}, self.vars[::-1])

    def shift_exponents(self, di: int, dj: int) -> "LatticePolynomial":
        """Multiply by x1^di x2^dj (negative shifts allowed when exact)."""
        out = {}
        for (i, j), c in self._terms.items():
            if i + di < 0 or j + dj < 0:
                raise ValueError("shift would create a negative exponent")
            out[(i + di, j + dj)] = c
        return LatticePolynomial._raw(out, self.vars)

    def univariate(self, index: int) -> list[Fraction]:
        """Dense coefficient list (ascending) of a polynomial in a single variable."""
        other = 1 - index
        if any(m[other] for m in self._terms):
            raise ValueError("polynomial depends on both variables")
        deg = self.degree_in(index)
        coeffs = [Fraction(0)] * (deg + 1)
        for m, c in self._terms.items():
            coeffs[m[index]] = c
        return coeffs

    def coefficients_in(self, index: int) -> dict[int, "LatticePolynomial"]:
        """Group by the exponent of one variable: {k: coefficient polynomial in the other}."""
        groups: dict[int, dict[Monomial, Fraction]] = {}
        for (i, j), c in self._terms.items():
            k, rest = ((i, (0, j)) if index == 0 else (j, (i, 0)))
            groups.setdefault(k, {})[rest] = c
        return {k: LatticePolynomial._raw(v, self.vars) for k, v in groups.items()}

    # evaluation
    def __call__(self, x1, x2):
        total = 0
        for (i, j), c in self._terms.items():
            total += c * x1**i * x2**j
        return total

    def evaluate_float(self, x1, x2):
        """Vectorised float evaluation (numpy broadcasting)."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        out = np.zeros(np.broadcast(x1, x2).shape)
        for (i, j), c in self._terms.items():
            out = out + float(c) * x1**i * x2**j
        return out

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(coefficients, x1 exponents, x2 exponents) as float/int arrays."""
        items = self.items()
        coeffs = np.array([float(c) for _, c in items], dtype=float)
        e1 = np.array([m[0] for m, _ in items], dtype=np.int64)
        e2 = np.array([m[1] for m, _ in items], dtype=np.int64)
        return coeffs, e1, e2

    # printing
    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"LatticePolynomial({format_polynomial(self)!r})"


def _bad_index(index: int):
    raise ValueError(f"variable index must be 0 or 1, got {index}")


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: LatticePolynomial) -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for (i, j), c in p.items():
        factors = []
        for name, e in zip(p.vars, (i, j)):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)
