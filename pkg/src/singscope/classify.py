"""A-type normal form, class split, line adaptation and critical exponents."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import ClassificationError, SeriesValidityError
from .newton import (
    NewtonPolyhedron,
    Weight,
    newton_distance,
    newton_polyhedron,
    principal_part,
    weighted_degree,
)
from .poly import univariate as up
from .poly.lattice import LatticePolynomial
from .poly.series import TruncatedSeries, as_series, compose, shear_substitute, solve_implicit

PolyLike = Union[LatticePolynomial, TruncatedSeries]

A_MINUS = "A_minus"
A_PLUS = "A_plus_generic"
A_E = "A_e"
NOT_A = "not_A_type"

THREE_HALVES = Fraction(3, 2)
MAX_PROBE_ORDER = 256


@dataclass(frozen=True)
class Interval:
    lower: Fraction
    upper: Fraction

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


@dataclass(frozen=True)
class NormalFormData:
    psi: TruncatedSeries
    b0: TruncatedSeries
    n: int
    m: int | None  # None: psi vanishes to the working order
    beta0: Fraction
    omega0: Fraction | None
    b1_0: Fraction  # b(0, 0), half the second x2-derivative
    order: int


@dataclass(frozen=True)
class EffectiveData:
    kappa: Weight
    n_e_coords: Fraction
    p: LatticePolynomial
    vertical: bool
    polyhedron: NewtonPolyhedron


@dataclass(frozen=True)
class AdaptationTest:
    a: bool
    b: bool
    c: bool
    k: Fraction | None
    root: Fraction | None

    @property
    def all_hold(self) -> bool:
        return self.a and self.b and self.c


@dataclass(frozen=True)
class LineAdaptation:
    alpha: TruncatedSeries
    phi_la: TruncatedSeries
    n_e: Fraction
    before: EffectiveData
    after: EffectiveData
    test_before: AdaptationTest
    test_after: AdaptationTest


@dataclass(frozen=True)
class AeDetection:
    is_Ae: bool
    failed: str | None  # "A1", "A2" or None
    u_shift: tuple[Fraction, int] | None
    extype: LatticePolynomial | None


@dataclass
class ClassificationReport:
    class_tag: str
    n: int
    m: int | None
    h: Fraction
    kappa_e: Weight | None
    n_e_x: Fraction | None
    n_e: Fraction | None
    p_e: Fraction | None
    p_c: Fraction | Interval
    coord_chain: list[TruncatedSeries]
    flags: dict[str, bool]
    order: int
    normal_form: NormalFormData
    kappa_e_adapted: Weight | None = None
    principal: LatticePolynomial | None = None
    adaptation: LineAdaptation | None = None
    ae: AeDetection | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def p_c_lower(self) -> Fraction:
        return self.p_c.lower if isinstance(self.p_c, Interval) else self.p_c


def _poly(phi: PolyLike) -> LatticePolynomial:
    return phi.poly if isinstance(phi, TruncatedSeries) else phi


def check_hessian(phi: PolyLike) -> Fraction:
    """Validate the linearly adapted A-type preconditions; return d2^2 phi(0)/2."""
    p = _poly(phi)
    if p.coeff(0, 0):
        raise ClassificationError("phi(0) must vanish")
    if p.coeff(1, 0) or p.coeff(0, 1):
        raise ClassificationError("the gradient of phi must vanish at the origin")
    b = p.coeff(0, 2)
    if not b:
        raise ClassificationError("Hessian precondition fails: d2^2 phi(0,0) = 0")
    if p.coeff(2, 0) or p.coeff(1, 1):
        raise ClassificationError(
            "Hessian precondition fails: input must be linearly adapted (d1^2 phi(0) = d1d2 phi(0) = 0)"
        )
    return b


def _max_order(phi: PolyLike) -> int | None:
    return phi.valid_order if isinstance(phi, TruncatedSeries) else None


def normal_form(phi: PolyLike, order: int) -> NormalFormData:
    """psi solves d2 phi(x1, psi) = 0; b0(x1) = phi(x1, psi(x1))."""
    b1_0 = check_hessian(phi)
    phi_s = as_series(phi)
    limit = _max_order(phi)
    psi_order = order if limit is None else min(order, limit - 1)
    if psi_order < 1:
        raise SeriesValidityError("truncation order too small for the critical curve")
    d2 = phi_s.diff(1)
    # unknown x2 goes to the first slot for the implicit solver
    sol = solve_implicit(TruncatedSeries(d2.poly.swap(), d2.valid_order), psi_order)
    psi = TruncatedSeries(sol.poly.swap().with_vars(phi_s.vars), sol.valid_order)
    x1 = TruncatedSeries(LatticePolynomial.monomial(1, 0, 1, phi_s.vars))
    b0 = compose(phi_s, x1, psi, cap=order)
    n = b0.poly.order()
    if n is None:
        raise ClassificationError(
            f"not of finite A-type within order {b0.valid_order}: b0 vanishes to the full truncation order"
        )
    if n < 3:
        raise ClassificationError(f"b0 has order {n} < 3")
    m = psi.poly.order()
    return NormalFormData(
        psi=psi,
        b0=b0,
        n=n,
        m=m,
        beta0=b0.poly.coeff(n, 0),
        omega0=None if m is None else psi.poly.coeff(m, 0),
        b1_0=b1_0,
        order=order,
    )


def find_n(phi: PolyLike) -> int:
    """Order of b0, found by doubling the probe order."""
    probe = 8
    limit = _max_order(phi)
    while True:
        cap = probe if limit is None else min(probe, limit)
        try:
            return normal_form(phi, cap).n
        except ClassificationError as exc:
            if "finite A-type" not in exc.message:
                raise
            if probe >= MAX_PROBE_ORDER or (limit is not None and cap >= limit):
                raise
        probe *= 2


def split_class(nf: NormalFormData, phi: PolyLike | None = None) -> str:
    """A_minus iff n >= 2m; cross-checked against the principal face when phi is given."""
    minus = nf.m is not None and nf.n >= 2 * nf.m
    if phi is not None:
        pp = principal_part(_poly(phi), (Fraction(1, nf.n), Fraction(1, 2)))
        face = pp.support() == {(0, 2), (nf.n, 0)}
        if face == minus:
            raise ClassificationError(
                "inconsistent class split: the n/2m test and the principal-face test disagree"
            )
    return A_MINUS if minus else "A_plus"


def effective_data(phi_tilde: PolyLike, n: int | None = None) -> EffectiveData:
    """Weight of the first non-horizontal edge of N(phi_red) and the induced n_e."""
    s = as_series(phi_tilde)
    red = s.poly.filter(lambda m: m[0] > 0)
    if n is None:
        n = min((m[0] for m in red.terms if m[1] == 0), default=None)
        if n is None:
            raise ClassificationError("phi_red has no pure x1-power")
    if red.is_zero() or (n, 0) not in red.terms:
        raise ClassificationError(f"({n},0) is not a vertex of N(phi_red)")
    np_ = newton_polyhedron(red.support())
    if np_.vertices[0] != (n, 0):
        raise ClassificationError(f"({n},0) is not a vertex of N(phi_red)")
    valid = s.valid_order
    if np_.edges:
        kappa = np_.edges[0].kappa
        vertical = False
        if valid is not None and (valid + 1) * min(kappa) <= 1:
            raise SeriesValidityError(
                f"truncation order {valid} too small to certify the edge of N(phi_red)"
            )
        p = principal_part(red, kappa)
    else:
        kappa = (Fraction(1, n), Fraction(0))
        vertical = True
        p = red.filter(lambda m: m[0] == n)
    n_e = (1 - kappa[1]) / kappa[0]
    return EffectiveData(kappa, n_e, p, vertical, np_)


def _weighted_profile(p: LatticePolynomial, k: int) -> list[Fraction]:
    """Coefficients of P(t) where p = sum c_i x1^i x2^(k(n-i))."""
    deg = p.degree_in(0)
    coeffs = [Fraction(0)] * (deg + 1)
    for (i, _), c in p.terms.items():
        coeffs[i] = c
    return coeffs


def adaptation_test(eff: EffectiveData, n: int) -> AdaptationTest:
    k1, k2 = eff.kappa
    a = k2 > 0
    if not a:
        return AdaptationTest(False, False, False, None, None)
    k = k1 / k2
    b = k.denominator == 1
    if not b:
        return AdaptationTest(True, False, False, k, None)
    prof = _weighted_profile(eff.p, int(k))
    deriv = up.derivative(prof)
    ok, root = up.is_perfect_power_of_linear(deriv)
    c = bool(ok and root and up.degree(deriv) == n - 1)
    return AdaptationTest(True, True, c, k, root if c else None)


def line_adapt(phi: PolyLike, order: int, n: int | None = None) -> LineAdaptation:
    """Shear to line-adapted coordinates y1 = x1 - alpha(x2) when conditions (a)-(c) hold."""
    s = as_series(phi)
    if n is None:
        n = find_n(phi)
    before = effective_data(s, n)
    test = adaptation_test(before, n)
    vars = s.vars
    if not test.all_hold:
        alpha = TruncatedSeries(LatticePolynomial.zero(vars))
        return LineAdaptation(alpha, s, before.n_e_coords, before, before, test, test)
    limit = s.valid_order
    alpha_order = order if limit is None else min(order, limit - n + 1)
    if alpha_order < 1:
        raise SeriesValidityError("truncation order too small for line adaptation")
    # alpha solves d1^(n-1) phi(alpha(x2), x2) = 0; the implicit function theorem applies
    # because d1^n phi(0) = n! beta0
    F = s.diff(0, n - 1)
    alpha = solve_implicit(F, alpha_order)
    cap = order if limit is None else min(order, limit)
    phi_la = shear_substitute(s, alpha, cap=cap)
    after = effective_data(phi_la, n)
    test_after = adaptation_test(after, n)
    if test_after.all_hold:
        raise ClassificationError("line adaptation did not terminate after one shear")
    return LineAdaptation(alpha, phi_la, after.n_e_coords, before, after, test, test_after)


def detect_Ae(p: LatticePolynomial, kappa: Weight, n: int) -> AeDetection:
    """Exceptional class test on the line-adapted principal part."""
    k1, k2 = Fraction(kappa[0]), Fraction(kappa[1])
    if k2 == 0:
        return AeDetection(False, None, None, None)
    d2 = p.diff(0, 2)
    if len(d2) == 1:
        return AeDetection(True, "A1", None, p)
    k = k1 / k2
    if k.denominator != 1 or n < 3:
        return AeDetection(False, None, None, None)
    prof = up.strip(_weighted_profile(d2, int(k)))
    ok, root = up.is_perfect_power_of_linear(prof)
    if not (ok and root and up.degree(prof) == n - 2):
        return AeDetection(False, None, None, None)
    a = int(k)
    # u1 = y1 - c*y2^a
    vars = p.vars
    shift = TruncatedSeries(LatticePolynomial.monomial(0, a, root, vars))
    shifted = shear_substitute(p, shift).poly.filter(lambda m: m[0] > 0)
    if len(shifted.diff(0, 2)) != 1:
        raise ClassificationError("u-shift did not produce the exceptional form")
    return AeDetection(True, "A2", (root, a), shifted)


def _p_from_ne(n_e: Fraction) -> Fraction:
    return 2 * n_e / (n_e + 1)


def classify(phi: PolyLike, order: int | None = None) -> ClassificationReport:
    """Full classification report with exact rational invariants."""
    check_hessian(phi)
    n = find_n(phi)
    if order is None:
        order = 4 * n
    limit = _max_order(phi)
    if limit is not None:
        order = min(order, limit)
    nf = normal_form(phi, order)
    n = nf.n
    flags = {
        "line_adapted_input": True,
        "kappa2_zero": False,
        "m_exceeds_order": nf.m is None,
        "n3_prior_result": n == 3,
    }
    h = Fraction(2 * n, n + 2)
    tag = split_class(nf, phi)
    notes: list[str] = []
    if tag == A_MINUS:
        p_c: Fraction | Interval = max(THREE_HALVES, h)
        return ClassificationReport(
            A_MINUS, n, nf.m, h, None, None, None, None, p_c, [], flags, order, nf, notes=notes
        )

    # A_plus: the principal face is [(0,2),(n,0)], so these coordinates are adapted
    d = newton_distance(newton_polyhedron(_poly(phi).support()))
    if d != h:
        raise ClassificationError(f"Newton distance {d} disagrees with the height {h}")
    la = line_adapt(phi, order, n)
    flags["line_adapted_input"] = not la.test_before.all_hold
    eff = la.after
    n_e = la.n_e
    if not (Fraction(n, 2) < n_e <= n):
        raise ClassificationError(f"effective multiplicity {n_e} outside (n/2, n]")
    p_e = _p_from_ne(n_e)
    chain = [] if flags["line_adapted_input"] else [la.alpha]
    ae: AeDetection | None = None
    if eff.kappa[1] == 0:
        flags["kappa2_zero"] = True
        notes.append(
            "kappa_2 = 0 in line-adapted coordinates: classified outside the exceptional class"
        )
        tag = A_PLUS
    else:
        ae = detect_Ae(eff.p, eff.kappa, n)
        tag = A_E if ae.is_Ae else A_PLUS
    if n == 3:
        p_c = THREE_HALVES
    elif tag == A_E:
        p_c = Interval(max(THREE_HALVES, p_e), max(THREE_HALVES, Fraction(2 * n, n + 1)))
    else:
        p_c = max(THREE_HALVES, p_e)
    return ClassificationReport(
        tag,
        n,
        nf.m,
        h,
        la.before.kappa,
        la.before.n_e_coords,
        n_e,
        p_e,
        p_c,
        chain,
        flags,
        order,
        nf,
        kappa_e_adapted=eff.kappa,
        principal=eff.p,
        adaptation=la,
        ae=ae,
        notes=notes,
    )


def weighted_degree_min(p: LatticePolynomial, kappa: Weight) -> Fraction:
    return min(weighted_degree(m, kappa) for m in p.terms)
