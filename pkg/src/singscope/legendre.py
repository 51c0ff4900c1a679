"""Legendre transform of the phase in x2 and the reduced phase used downstream."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classify import (
    A_E,
    A_MINUS,
    ClassificationReport,
    PolyLike,
    check_hessian,
    classify,
    line_adapt,
)
from .errors import LegendreError, SeriesValidityError
from .newton import principal_part, weighted_degree
from .poly.lattice import LatticePolynomial
from .poly.series import TruncatedSeries, as_series, compose, shear_substitute

LEG_VARS = ("x1", "s2")
ROUTE_MINUS = "A_minus_adapted"
ROUTE_PLUS = "A_plus_line_adapted"


@dataclass(frozen=True)
class LegendreData:
    x2c: TruncatedSeries
    w0: TruncatedSeries
    B: TruncatedSeries
    phi1: TruncatedSeries
    phi_breve: TruncatedSeries
    route: str
    alpha_tilde: TruncatedSeries | None
    c: Fraction
    b1_0: Fraction
    checks: dict[str, bool]

    @property
    def B0(self) -> Fraction:
        return self.B.poly.coeff(0, 0)


def critical_point(phi: PolyLike, order: int) -> TruncatedSeries:
    """x2c(x1, s2) solving d2 phi(x1, x2c) + s2 = 0, built one total degree at a time."""
    s = as_series(phi)
    d2 = s.diff(1).with_vars(LEG_VARS)
    if d2.valid_order is not None:
        order = min(order, d2.valid_order)
    c0 = d2.poly.coeff(0, 1)
    if not c0:
        raise LegendreError("degenerate second derivative: d2^2 phi(0,0) = 0")
    x1 = TruncatedSeries(LatticePolynomial.monomial(1, 0, 1, LEG_VARS))
    s2 = LatticePolynomial.monomial(0, 1, 1, LEG_VARS)
    X = LatticePolynomial.zero(LEG_VARS)
    inv = 1 / Fraction(c0)
    for d in range(1, order + 1):
        R = compose(d2.poly, x1, X, cap=d).poly + s2
        X = X - R.filter(lambda m, d=d: m[0] + m[1] == d) * inv
    residual = compose(d2.poly, x1, X, cap=order).poly + s2
    if not residual.is_zero():
        raise LegendreError("critical-point residual does not vanish through the valid order")
    return TruncatedSeries(X, order)


def _only_s2(series: TruncatedSeries, shift: int) -> TruncatedSeries:
    """Terms free of x1, divided by s2^shift."""
    v = series.valid_order
    terms = {}
    for (i, j), c in series.poly.terms.items():
        if i == 0:
            if j < shift:
                raise LegendreError(f"unexpected s2^{j} term in the x1-free part")
            terms[(0, j - shift)] = c
    return TruncatedSeries(LatticePolynomial(terms, LEG_VARS), None if v is None else v - shift)


def legendre_x2(
    phi: PolyLike,
    order: int | None = None,
    report: ClassificationReport | None = None,
) -> LegendreData:
    """phi_breve(x1, s2) = phi(x1, x2c) + s2 * x2c, split as s2^2 B(s2) + phi1."""
    b1_0 = check_hessian(phi)
    if report is None:
        report = classify(phi, order)
    if order is None:
        order = report.order
    s = as_series(phi).with_vars(LEG_VARS)
    if s.valid_order is not None:
        order = min(order, s.valid_order)
    if order < 3:
        raise SeriesValidityError("order underflow in the Legendre transform")
    X = critical_point(s, order)
    order = X.valid_order
    x1 = TruncatedSeries(LatticePolynomial.monomial(1, 0, 1, LEG_VARS))
    s2 = TruncatedSeries(LatticePolynomial.monomial(0, 1, 1, LEG_VARS))
    breve = compose(s, x1, X, cap=order) + (s2 * X).cap(order)
    breve = breve.cap(order)
    w0 = _only_s2(X, 1)
    c = w0.poly.coeff(0, 0)
    checks: dict[str, bool] = {}
    checks["c_formula"] = c == -1 / (2 * b1_0)

    if report.class_tag == A_MINUS:
        route = ROUTE_MINUS
        alpha_tilde = None
        B = _only_s2(breve, 2)
        phi1 = TruncatedSeries(breve.poly.filter(lambda m: m[0] > 0), breve.valid_order)
        nf = report.normal_form
        b0 = nf.b0.with_vars(LEG_VARS)
        psi = nf.psi.with_vars(LEG_VARS)
        rest = phi1 - b0 - (s2 * psi)
        top = rest.valid_order
        checks["minus_shape"] = all(
            i >= 1 and j >= 2 for (i, j) in rest.poly.terms if top is None or i + j <= top
        )
    else:
        route = ROUTE_PLUS
        alpha = report.adaptation.alpha.with_vars(LEG_VARS) if report.adaptation else None
        if alpha is None or alpha.poly.is_zero():
            alpha_tilde = TruncatedSeries(LatticePolynomial.zero(LEG_VARS), order)
            shifted = breve
        else:
            x2c0 = TruncatedSeries(X.poly.filter(lambda m: m[0] == 0), X.valid_order)
            zero = TruncatedSeries(LatticePolynomial.zero(LEG_VARS))
            alpha_tilde = compose(alpha, zero, x2c0, cap=order)
            shifted = shear_substitute(breve, alpha_tilde, cap=order)
        B = _only_s2(shifted, 2)
        phi1 = TruncatedSeries(shifted.poly.filter(lambda m: m[0] > 0), shifted.valid_order)
        checks.update(_plus_principal_check(phi1, report, c))
    checks["B0_formula"] = B.poly.coeff(0, 0) == -1 / (4 * b1_0)
    if not checks["B0_formula"]:
        raise LegendreError("B(0) differs from -1/(4 b1(0))")
    return LegendreData(X, w0, B, phi1, breve, route, alpha_tilde, c, b1_0, checks)


def _plus_principal_check(
    phi1: TruncatedSeries, report: ClassificationReport, c: Fraction
) -> dict[str, bool]:
    kappa = report.kappa_e_adapted
    p = report.principal
    if kappa is None or p is None:
        return {}
    if kappa[1] == 0:
        # vertical edge: the shifted transform need not keep it exactly
        low = min(m[0] for m in phi1.poly.terms)
        return {"vertical_edge_kept": low == report.n}
    v = phi1.valid_order
    if v is not None and (v + 1) * min(kappa) <= 1:
        raise SeriesValidityError("order too small to certify the principal part of phi1")
    expected = LatticePolynomial(
        {(i, j): coeff * c**j for (i, j), coeff in p.terms.items()}, LEG_VARS
    )
    got = principal_part(phi1.poly, kappa)
    graded = all(weighted_degree(m, kappa) >= 1 for m in phi1.poly.terms)
    return {"principal_matches": got == expected, "error_terms_higher_degree": graded}


@dataclass(frozen=True)
class ReducedPhase:
    """phi1 handed to the resolution, with the shear that produced it."""

    phi1: TruncatedSeries
    shear: TruncatedSeries | None
    leading_shear_agrees: bool | None


def reduced_phase(data: LegendreData, report: ClassificationReport) -> ReducedPhase:
    """phi1 in coordinates line-adapted to the transform itself.

    alpha_tilde only matches the exact line-adapting shear of the transform to
    leading order; with a vertical effective edge the higher-order mismatch
    would show up as spurious compact edges of Phi, so the A_plus route
    re-adapts the transform directly.
    """
    if data.route == ROUTE_MINUS:
        return ReducedPhase(data.phi1, None, None)
    breve = data.phi_breve
    order = breve.valid_order if breve.valid_order is not None else report.order
    la = line_adapt(breve, order, report.n)
    phi1 = TruncatedSeries(la.phi_la.poly.filter(lambda m: m[0] > 0), la.phi_la.valid_order)
    agree = None
    if data.alpha_tilde is not None:
        mine = la.alpha.poly
        theirs = data.alpha_tilde.poly
        low = min((m[1] for m in (mine - theirs).terms), default=None)
        lead = min((m[1] for m in theirs.terms), default=None)
        agree = low is None or lead is None or low > lead
    return ReducedPhase(phi1, la.alpha, agree)


@dataclass(frozen=True)
class InvarianceReport:
    n_e_phi: Fraction
    n_e_breve: Fraction
    class_phi: str
    class_breve: str
    equal: bool
    class_preserved: bool
    notes: list[str]


def verify_legendre_invariance(phi: PolyLike, order: int | None = None) -> InvarianceReport:
    """Effective multiplicity (and class) of phi and of its Legendre transform."""
    rep = classify(phi, order)
    if rep.class_tag == A_MINUS:
        raise LegendreError("invariance check requires an A_plus input")
    data = legendre_x2(phi, rep.order, rep)
    breve = data.phi_breve.with_vars(("x1", "x2"))
    rep_b = classify(breve, rep.order)
    notes = []
    if rep_b.flags.get("kappa2_zero") and breve.valid_order is not None:
        notes.append(f"vertical edge of the transform certified only to order {breve.valid_order}")
    same_class = (rep.class_tag == A_E) == (rep_b.class_tag == A_E)
    return InvarianceReport(
        rep.n_e, rep_b.n_e, rep.class_tag, rep_b.class_tag, rep.n_e == rep_b.n_e, same_class, notes
    )
