from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singscope.errors import ParseError, PreconditionError, SeriesValidityError
from singscope.poly import (
    LatticePolynomial,
    TruncatedSeries,
    compose,
    format_polynomial,
    parse_poly,
    shear_substitute,
    solve_implicit,
    taylor_support,
)


def terms(text):
    return dict(parse_poly(text).terms)


class TestParse:
    def test_two_terms(self):
        assert terms("x2^2 + x1^5") == {(0, 2): 1, (5, 0): 1}

    def test_zero_exponent_and_product(self):
        assert terms("(1 + x1^2*x2^0)*x2^2 + x1^4") == {(0, 2): 1, (2, 2): 1, (4, 0): 1}

    def test_binomial_expansion(self):
        p = parse_poly("x2^2 + (x1+x2^2)^4")
        assert len(p) == 6  # x1^4 ... x2^8 plus x2^2
        for mono in [(0, 2), (4, 0), (0, 8)]:
            assert p.coeff(*mono) == 1
        assert p.coeff(2, 4) == 6

    def test_aliases_and_implicit_multiplication(self):
        assert parse_poly("3x y^2") == parse_poly("3*x1*x2^2")

    def test_rational_literals(self):
        assert parse_poly("1/3*x1 - 2/4 x2").coeff(0, 1) == Fraction(-1, 2)

    def test_precedence(self):
        assert parse_poly("2*x1^2 + 3") == parse_poly("3 + 2*(x1^2)")
        assert parse_poly("-x1^2").coeff(2, 0) == -1

    @pytest.mark.parametrize("bad, offset", [("x1 +", 4), ("x3", 0), ("x1^-2", 3), ("x1^(1/2)", 3)])
    def test_errors_carry_offsets(self, bad, offset):
        with pytest.raises(ParseError) as err:
            parse_poly(bad)
        assert err.value.offset == offset

    def test_unknown_identifier_message(self):
        with pytest.raises(ParseError, match="unknown identifier"):
            parse_poly("z + x1")


def test_taylor_support():
    assert taylor_support(parse_poly("x2^2 + x1^5")) == {(0, 2), (5, 0)}
    assert taylor_support(LatticePolynomial.zero()) == set()
    assert taylor_support(parse_poly("(1 + x1^2)*x2^2 + x1^4")) == {(0, 2), (2, 2), (4, 0)}


def test_no_zero_coefficients_are_stored():
    p = parse_poly("x1*x2 - x2*x1 + x1")
    assert dict(p.terms) == {(1, 0): 1}


class TestShear:
    def test_removes_the_curve(self):
        p = parse_poly("x2^2 + (x1+x2^2)^4")
        a = TruncatedSeries(parse_poly("-x2^2"))
        assert shear_substitute(p, a).poly == parse_poly("x2^2 + x1^4")

    def test_identity(self):
        p = parse_poly("x1^3 + 5*x1*x2 + x2^7")
        assert shear_substitute(p, TruncatedSeries(LatticePolynomial.zero())).poly == p

    def test_binomial(self):
        assert shear_substitute(parse_poly("x1^2"), parse_poly("x2")).poly == parse_poly("x1^2 + 2*x1*x2 + x2^2")

    def test_rejects_constant_shear(self):
        with pytest.raises(PreconditionError):
            shear_substitute(parse_poly("x1"), parse_poly("1 + x2"))

    def test_truncated_shear_propagates_validity(self):
        a = TruncatedSeries(parse_poly("x2^2"), 5)
        out = shear_substitute(parse_poly("x1^2"), a)
        # tail of a starts at degree 6; times the valuation-1 factor it first hits degree 7
        assert out.valid_order == 6
        with pytest.raises(SeriesValidityError):
            out.coeff(0, 7)


class TestImplicit:
    def test_linear(self):
        assert solve_implicit(parse_poly("2*x1 + x2"), 4).poly == parse_poly("-1/2*x2")

    def test_quadratic_against_hand_expansion(self):
        u = solve_implicit(parse_poly("2*x1 + x2 + x1^2"), 3)
        assert u.poly == parse_poly("-1/2*x2 - 1/8*x2^2 - 1/16*x2^3")

    def test_residual_vanishes_through_order(self):
        F = parse_poly("3*x1 - x2 + x1*x2 + x1^3 - 2*x2^4")
        u = solve_implicit(F, 8)
        res = compose(F, u, parse_poly("x2"), cap=8).poly
        assert res.is_zero()

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            solve_implicit(parse_poly("x2 + x1^2"), 3)
        with pytest.raises(PreconditionError):
            solve_implicit(parse_poly("1 + x1"), 3)
        with pytest.raises(SeriesValidityError):
            solve_implicit(TruncatedSeries(parse_poly("x1 + x2"), 2), 3)


def test_series_refuses_unknown_coefficients():
    s = TruncatedSeries(parse_poly("x1 + x2^2"), 3)
    assert s.coeff(0, 2) == 1
    assert s.coeff(2, 1) == 0
    with pytest.raises(SeriesValidityError):
        s.coeff(0, 4)


def test_series_product_validity_is_propagated_minimum():
    a = TruncatedSeries(parse_poly("x1"), 4)
    b = TruncatedSeries(parse_poly("x2^2"), 6)
    assert (a * b).valid_order == min(4 + 2, 6 + 1)


# ---------------------------------------------------------------- properties

coef = st.fractions(min_value=-20, max_value=20, max_denominator=7)
monomial = st.tuples(st.integers(0, 8), st.integers(0, 8)).filter(lambda m: m[0] + m[1] <= 8)
polys = st.dictionaries(monomial, coef, max_size=6).map(LatticePolynomial)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_distributive_law(p, q, r):
    assert (p + q) * r == p * r + q * r


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_commutative_product_and_derivative_rule(p, q):
    assert p * q == q * p
    assert (p * q).diff(0) == p.diff(0) * q + p * q.diff(0)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_parse_print_parse_fixed_point(p):
    text = format_polynomial(p)
    again = parse_poly(text)
    assert again == p
    assert format_polynomial(again) == text


shears = st.dictionaries(st.tuples(st.just(0), st.integers(1, 4)), coef, max_size=3).map(LatticePolynomial)


@settings(max_examples=40, deadline=None)
@given(polys, shears)
def test_shear_is_invertible_to_order(p, a):
    order = 10
    forward = shear_substitute(TruncatedSeries(p, order), TruncatedSeries(a, order))
    back = shear_substitute(forward, TruncatedSeries(-a, order))
    limit = back.valid_order
    assert back.poly.truncate(limit) == p.truncate(limit)
