from fractions import Fraction

import pytest

from singscope.classify import A_E, classify
from singscope.errors import LegendreError
from singscope.legendre import (
    LEG_VARS,
    ROUTE_MINUS,
    ROUTE_PLUS,
    critical_point,
    legendre_x2,
    reduced_phase,
    verify_legendre_invariance,
)
from singscope.newton import weighted_degree
from singscope.poly import LatticePolynomial, TruncatedSeries, parse_poly
from singscope.poly.series import compose

from conftest import GOLDEN_AE, GOLDEN_PLUS
from corpora import RANDOM_30

F = Fraction


class TestCriticalPoint:
    def test_pure_quadratic(self):
        X = critical_point(parse_poly("x2^2 + x1^4"), 12)
        assert X.poly == LatticePolynomial({(0, 1): F(-1, 2)}, LEG_VARS)

    def test_degenerate(self):
        with pytest.raises(LegendreError):
            critical_point(parse_poly("x1^4 + x2^3"), 8)

    @pytest.mark.parametrize("index", range(30))
    def test_residual_vanishes(self, index):
        phi = RANDOM_30[index]
        order = 16
        X = critical_point(phi, order)
        d2 = TruncatedSeries(phi.diff(1)).with_vars(LEG_VARS)
        x1 = TruncatedSeries(LatticePolynomial.monomial(1, 0, 1, LEG_VARS))
        s2 = LatticePolynomial.monomial(0, 1, 1, LEG_VARS)
        assert (compose(d2, x1, X, cap=order).poly + s2).is_zero()


class TestTransform:
    def test_pure_model(self):
        data = legendre_x2(parse_poly("x2^2 + x1^4"))
        assert data.x2c.poly == LatticePolynomial({(0, 1): F(-1, 2)}, LEG_VARS)
        assert data.B.poly == LatticePolynomial({(0, 0): F(-1, 4)}, LEG_VARS)
        assert data.phi1.poly == LatticePolynomial({(4, 0): F(1)}, LEG_VARS)

    def test_a_minus_route_shape(self):
        data = legendre_x2(parse_poly("(x2 - x1^2)^2 + x1^5"))
        assert data.route == ROUTE_MINUS
        support = set(data.phi1.poly.terms)
        assert {(5, 0), (2, 1)} <= support
        assert data.phi1.poly.coeff(5, 0) == 1
        assert data.phi1.poly.coeff(2, 1) == 1
        assert data.checks["minus_shape"]
        # the s2^2 x1 q part starts strictly above the leading terms
        assert all(j >= 2 for (i, j) in support - {(5, 0), (2, 1)})

    def test_a_plus_principal_part_is_rescaled(self):
        data = legendre_x2(parse_poly("(1 + x1^2)*x2^2 + x1^4"))
        assert data.route == ROUTE_PLUS
        assert data.B0 == F(-1, 4)
        assert data.c == F(-1, 2)
        assert data.checks["principal_matches"]
        assert data.checks["error_terms_higher_degree"]

    @pytest.mark.parametrize("index", range(30))
    def test_b0_formula_on_random_inputs(self, index):
        phi = RANDOM_30[index]
        data = legendre_x2(phi)
        b1 = phi.coeff(0, 2)
        assert data.B0 == -1 / (4 * b1)
        assert data.c == -1 / (2 * b1)
        # phi1 carries no x1-free term
        assert all(i > 0 for (i, _) in data.phi1.poly.terms)

    @pytest.mark.parametrize("text", ["(1 + x1^2)*x2^2 + x1^5", "(1 + x1^2)*x2^2 + x1^4", "(1 + x1)*x2^2 + x1^5"])
    def test_error_terms_are_graded(self, text):
        rep = classify(parse_poly(text))
        data = legendre_x2(parse_poly(text), report=rep)
        kappa = rep.kappa_e_adapted
        principal = {m for m in data.phi1.poly.terms if weighted_degree(m, kappa) == 1}
        assert principal
        assert all(weighted_degree(m, kappa) > 1 for m in set(data.phi1.poly.terms) - principal)

    def test_reduced_phase_is_line_adapted(self):
        phi = parse_poly("x2^2 + (x1+x2^2)^4")
        rep = classify(phi)
        red = reduced_phase(legendre_x2(phi, report=rep), rep)
        assert red.leading_shear_agrees
        assert red.phi1.poly.coeff(4, 0) == 1
        # vertical effective edge: after re-adaptation no column left of x1^4 survives
        assert min(i for i, _ in red.phi1.poly.terms) == 4


@pytest.mark.parametrize("text", sorted(GOLDEN_PLUS) + GOLDEN_AE[:1])
def test_effective_multiplicity_is_invariant(text):
    phi = parse_poly(text)
    n = classify(phi).n
    inv = verify_legendre_invariance(phi, 4 * n)
    assert inv.n_e_phi == inv.n_e_breve
    assert inv.equal and inv.class_preserved


def test_exceptional_class_is_preserved():
    inv = verify_legendre_invariance(parse_poly(GOLDEN_AE[0]))
    assert inv.class_phi == A_E == inv.class_breve


def test_invariance_rejects_a_minus():
    with pytest.raises(LegendreError):
        verify_legendre_invariance(parse_poly("(x2 - x1^2)^2 + x1^5"))
