"""Summability bookkeeping: dyadic-sum exponents as functions of p, and the critical p they imply.

Every margin is a maximum of affine functions of u = 1/p.  A margin below zero
means the corresponding double dyadic sum converges (with room for a small
epsilon).  The predicted critical exponent is the least p > 3/2 at which all
margins of all resolution steps are negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classify import A_E, A_MINUS, ClassificationReport
from .errors import ExponentError
from .puiseux.resolve import CASE1, ResolutionStep

Affine = tuple[Fraction, Fraction]  # c0 + c1 * u

E0_STEP1 = "E_0_step1"
EL_STEP1 = "E_l_step1"
EL_STEP2 = "E_l_step2"
EL_STEP1_PLUS = "E_l_step1_Aplus"
EL_STEP2_PLUS = "E_l_step2_Aplus"
VARIANTS = (E0_STEP1, EL_STEP1, EL_STEP2, EL_STEP1_PLUS, EL_STEP2_PLUS)

LOWER = Fraction(3, 2)
UPPER = Fraction(2)


@dataclass(frozen=True)
class EdgeBudget:
    """Vertex (B, A) of a resolution step with the slopes bounding its dyadic k-range.

    ``a`` is the slope of the step's first edge (the shift slope past Step 1),
    ``a_tilde`` the slope of the edge to the right of the vertex; None stands
    for an infinite slope.
    """

    A: Fraction
    B: Fraction
    a: Fraction | None
    a_tilde: Fraction | None
    bound_const: Fraction
    n: int
    plus: bool = False
    label: str = ""

    def lemma_value(self) -> Fraction | None:
        """(A - 1)/a_tilde + B + 2, defined when A >= 1."""
        if self.A < 1:
            return None
        inv = Fraction(0) if self.a_tilde is None else 1 / self.a_tilde
        return (self.A - 1) * inv + self.B + 2


@dataclass(frozen=True)
class Margin:
    name: str
    pieces: tuple[Affine, ...]
    budget: str

    def at(self, p) -> Fraction:
        u = 1 / Fraction(p)
        return max(c0 + c1 * u for c0, c1 in self.pieces)

    def threshold(self) -> Fraction:
        """Least p beyond which the margin is negative (may lie below 3/2)."""
        worst = Fraction(0)
        for c0, c1 in self.pieces:
            if c1 > 0:
                if c0 >= 0:
                    raise ExponentError(f"margin {self.name} is never negative")
                worst = max(worst, c1 / -c0)
            elif c0 + c1 / 2 > 0:
                raise ExponentError(f"non-monotone margin {self.name}: positive as p -> 2")
        return worst


def _dyadic(k: Fraction) -> Affine:
    """k (2u - 1) - 1."""
    return (-k - 1, 2 * k)


def _half(k: Fraction) -> Affine:
    """k (u - 1/2) - 1."""
    return (-k / 2 - 1, k)


def _add(x: Affine, y: Affine, scale: Fraction = Fraction(1)) -> Affine:
    return (x[0] + scale * y[0], x[1] + scale * y[1])


def _inv(a: Fraction | None) -> Fraction:
    return Fraction(0) if a is None else 1 / a


def _margins(b: EdgeBudget, variant: str) -> list[Margin]:
    inv = _inv(b.a_tilde)
    if variant == E0_STEP1:
        return [
            Margin("suminjk2_first", (_dyadic(b.n - _inv(b.a)),), b.label),
            Margin("suminjk2_second", (_half(Fraction(b.n)),), b.label),
        ]
    first = (b.A - 1) * inv + b.B + 2 if b.A >= 1 else b.B + 2
    out = [
        Margin("crucsum_first", (_dyadic(first),), b.label),
        Margin("crucsum_second", (_half(b.A * inv + b.B + 2),), b.label),
    ]
    if variant in (EL_STEP1, EL_STEP1_PLUS):
        return out
    alpha: Affine = (-(b.B + 2) / 2 - 2, b.B + 4)
    beta3: Affine = (1 - b.A / 2, b.A - 2)
    a_prime = b.a if not b.plus else min(b.a, b.a_tilde) if b.a_tilde is not None else b.a
    beta4: Affine = (a_prime - b.A / 2, b.A - 2 * a_prime)
    out.append(Margin("tsuminjk1_third", (alpha, _add(alpha, beta3, inv)), b.label))
    out.append(Margin("tsuminjk1_fourth", (alpha, _add(alpha, beta4, inv)), b.label))
    return out


def summability_margins(budget: EdgeBudget, p, variant: str) -> list[tuple[str, Fraction]]:
    """Exact j-coefficients of the dyadic sums at Lebesgue exponent p (epsilon = 0)."""
    p = Fraction(p)
    if not LOWER < p < UPPER:
        raise ExponentError("p must lie strictly between 3/2 and 2")
    if variant not in VARIANTS:
        raise ExponentError(f"unknown variant {variant!r}")
    if variant != E0_STEP1 and budget.a_tilde is not None and budget.a_tilde <= 0:
        raise ExponentError("malformed budget: non-positive slope")
    return [(m.name, m.at(p)) for m in _margins(budget, variant)]


FLOOR = (
    Margin("floor_three_halves", ((Fraction(-2), Fraction(3)),), "floor"),
    Margin("floor_lambda_small", ((Fraction(-3, 2), Fraction(2)),), "floor"),
)


@dataclass(frozen=True)
class Budgets:
    entries: list[tuple[EdgeBudget, str]]
    bound_const: Fraction


def collect_budgets(steps: list[ResolutionStep], report: ClassificationReport, n: int) -> Budgets:
    """Vertex budgets of every domain the resolution produces."""
    plus = report.class_tag != A_MINUS
    bound = report.n_e if plus else Fraction(report.m)
    s1, sl = (EL_STEP1_PLUS, EL_STEP2_PLUS) if plus else (EL_STEP1, EL_STEP2)
    out: list[tuple[EdgeBudget, str]] = []
    first_slope = None
    if steps:
        first_slope = steps[0].polyhedron.edges[0].slope if steps[0].polyhedron.edges else None
    out.append((EdgeBudget(Fraction(0), Fraction(n - 2), first_slope, first_slope, bound, n, plus, "E_0"),
                E0_STEP1))
    for st in steps:
        poly = st.polyhedron
        rel = [v for v in poly.vertices if v[0] <= st.column_limit]
        if st.step_index == 1:
            for l, (B, A) in enumerate(poly.vertices[1:], start=1):
                a = poly.edge(l).slope
                out.append((EdgeBudget(A, B, a, a, bound, n, plus, f"step1/E_{l}"), s1))
        else:
            for B, A in rel:
                right = [e for e in poly.edges if e.left == (B, A)]
                a_t = right[0].slope if right and B < st.column_limit else st.shift_slope
                out.append((EdgeBudget(A, B, st.shift_slope, a_t, bound, n, plus,
                                       f"step{st.step_index}{list(st.path)}/vertex({B},{A})"), sl))
        for br in st.branches:
            if br.case_tag != CASE1:
                continue
            B, A = br.shifted_polyhedron.vertices[-1]
            a = br.slope
            step_a = a if st.step_index == 1 else st.shift_slope
            out.append((EdgeBudget(A, B, step_a, a, bound, n, plus,
                                   f"step{st.step_index}{list(st.path)}/case1(edge {br.edge})"), sl))
    return Budgets(out, bound)


@dataclass(frozen=True)
class SummabilityReport:
    predicted_pc: Fraction
    bisection_pc: Fraction
    binding: list[str]
    margins: list[tuple[str, str, Margin]]
    lemma_checks: list[tuple[str, Fraction, Fraction]]
    class_p_c: object
    agrees: bool | None

    def margins_at(self, p) -> list[tuple[str, str, Fraction]]:
        return [(label, m.name, m.at(p)) for label, _, m in self.margins]


def _bisect(margins: list[Margin]) -> Fraction:
    def ok(p: Fraction) -> bool:
        return all(m.at(p) < 0 for m in margins)

    lo, hi = LOWER, UPPER - Fraction(1, 10**6)
    if not ok(hi):
        raise ExponentError("margins are not all negative below p = 2")
    for _ in range(60):
        mid = (lo + hi) / 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi.limit_denominator(1000)


def predicted_pc(steps: list[ResolutionStep], report: ClassificationReport) -> SummabilityReport:
    """Least p with all margins negative; compared against the classification's p_c."""
    n = report.n
    budgets = collect_budgets(steps, report, n)
    rows: list[tuple[str, str, Margin]] = []
    lemma_rows = []
    for b, variant in budgets.entries:
        value = b.lemma_value()
        if value is not None and variant != E0_STEP1:
            lemma_rows.append((b.label, value, b.bound_const))
            # the exceptional class is exactly where the bound is not expected to hold
            if value > b.bound_const and report.class_tag != A_E:
                raise ExponentError(
                    f"consistency check failed at {b.label}: (A-1)/a+B+2 = {value} > {b.bound_const}"
                )
        for m in _margins(b, variant):
            rows.append((b.label, variant, m))
    for m in FLOOR:
        rows.append(("floor", "floor", m))
    thresholds = [(m.threshold(), f"{label}:{m.name}") for label, _, m in rows]
    pc = max([LOWER, *(t for t, _ in thresholds)])
    binding = [name for t, name in thresholds if t == pc]
    bis = _bisect([m for _, _, m in rows])
    if abs(bis - pc) > Fraction(1, 10**5):
        raise ExponentError(f"bisection ({bis}) disagrees with the closed-form threshold ({pc})")
    agrees = None if report.class_tag == A_E else pc == report.p_c
    return SummabilityReport(pc, bis, binding, rows, lemma_rows, report.p_c, agrees)
