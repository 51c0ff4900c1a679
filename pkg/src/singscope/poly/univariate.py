"""Exact univariate polynomials over Q as ascending coefficient lists.

Used for edge polynomials, square-free decompositions and Sturm counts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

UPoly = list[Fraction]


def strip(p: Sequence) -> UPoly:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    return len(strip(p)) - 1


def add(p: Sequence, q: Sequence) -> UPoly:
    n = max(len(p), len(q))
    return strip([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def scale(p: Sequence, c) -> UPoly:
    return strip([Fraction(x) * c for x in p])


def mul(p: Sequence, q: Sequence) -> UPoly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return strip(out)


def power(p: Sequence, k: int) -> UPoly:
    out: UPoly = [Fraction(1)]
    for _ in range(k):
        out = mul(out, p)
    return out


def derivative(p: Sequence) -> UPoly:
    return strip([i * Fraction(p[i]) for i in range(1, len(p))])


def divmod_poly(p: Sequence, q: Sequence) -> tuple[UPoly, UPoly]:
    p = strip(p)
    q = strip(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
    rem = list(p)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, c in enumerate(q):
            rem[shift + i] -= factor * c
        rem = strip(rem)
    return strip(quot), rem


def monic(p: Sequence) -> UPoly:
    p = strip(p)
    if not p:
        return []
    lead = p[-1]
    return [c / lead for c in p]


def gcd(p: Sequence, q: Sequence) -> UPoly:
    a, b = strip(p), strip(q)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def exact_div(p: Sequence, q: Sequence) -> UPoly:
    quot, rem = divmod_poly(p, q)
    if rem:
        raise ArithmeticError("polynomial division is not exact")
    return quot


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc


def squarefree_decomposition(p: Sequence) -> list[tuple[UPoly, int]]:
    """Yun's algorithm: p = lc * prod f_k^k with f_k square-free and pairwise coprime."""
    p = monic(p)
    if len(p) <= 1:
        return []
    out: list[tuple[UPoly, int]] = []
    dp = derivative(p)
    a = gcd(p, dp)
    b = exact_div(p, a)
    c = exact_div(dp, a)
    d = add(c, scale(derivative(b), -1))
    k = 1
    while len(b) > 1:
        g = gcd(b, d)
        if len(g) > 1:
            out.append((g, k))
        b = exact_div(b, g)
        c = exact_div(d, g)
        d = add(c, scale(derivative(b), -1))
        k += 1
    return out


def sturm_sequence(p: Sequence) -> list[UPoly]:
    seq = [strip(p), derivative(p)]
    while seq[-1]:
        _, r = divmod_poly(seq[-2], seq[-1])
        if not r:
            break
        seq.append(scale(r, -1))
    return [s for s in seq if s]


def _sign_changes(values: list) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def _signs_at_infinity(seq: list[UPoly], positive: bool) -> list[int]:
    out = []
    for s in seq:
        lead = s[-1]
        deg = len(s) - 1
        sign = 1 if lead > 0 else -1
        if not positive and deg % 2 == 1:
            sign = -sign
        out.append(sign)
    return out


def count_real_roots(p: Sequence, lower=None, upper=None) -> int:
    """Distinct real roots in (lower, upper]; None stands for -inf / +inf."""
    p = strip(p)
    if len(p) <= 1:
        return 0
    seq = sturm_sequence(p)
    lo = _signs_at_infinity(seq, False) if lower is None else [evaluate(s, Fraction(lower)) for s in seq]
    hi = _signs_at_infinity(seq, True) if upper is None else [evaluate(s, Fraction(upper)) for s in seq]
    return _sign_changes(lo) - _sign_changes(hi)


def is_perfect_power_of_linear(p: Sequence) -> tuple[bool, Fraction | None]:
    """Whether p = lc * (t - r)^d with rational r; returns (flag, r)."""
    p = strip(p)
    d = len(p) - 1
    if d < 1:
        return False, None
    m = monic(p)
    r = -m[d - 1] / d
    return (m == monic(power([-r, Fraction(1)], d)), r)


def numeric_roots(p: Sequence, polish_steps: int = 3) -> np.ndarray:
    """Complex roots of a (square-free) polynomial, Newton-polished."""
    coeffs = [complex(c) for c in strip(p)]
    if len(coeffs) <= 1:
        return np.zeros(0, dtype=complex)
    desc = np.array(coeffs[::-1], dtype=complex)
    roots = np.roots(desc)
    d1 = np.polyder(desc)
    for _ in range(polish_steps):
        f = np.polyval(desc, roots)
        df = np.polyval(d1, roots)
        safe = np.abs(df) > 0
        roots = np.where(safe, roots - np.where(safe, f / np.where(safe, df, 1), 0), roots)
    return roots
