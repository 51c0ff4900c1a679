import random
from fractions import Fraction

import pytest

from singscope.classify import (
    A_E,
    A_MINUS,
    A_PLUS,
    Interval,
    classify,
    detect_Ae,
    effective_data,
    line_adapt,
    normal_form,
    split_class,
)
from singscope.errors import ClassificationError
from singscope.poly import LatticePolynomial, TruncatedSeries, parse_poly, shear_substitute, solve_implicit
from singscope.poly.series import compose

from conftest import GOLDEN_AE, GOLDEN_MINUS, GOLDEN_PLUS, geometric_x2_squared

F = Fraction


def shear(coeffs: dict[int, Fraction]) -> TruncatedSeries:
    """alpha(x2) = sum c_k x2^k as an exact series."""
    return TruncatedSeries(LatticePolynomial({(0, k): F(c) for k, c in coeffs.items()}, ("x1", "x2")))


class TestNormalForm:
    def test_explicit_a_minus(self):
        nf = normal_form(parse_poly("(x2 - x1^2)^2 + x1^5"), 20)
        assert nf.psi.poly == parse_poly("x1^2")
        assert nf.b0.poly == parse_poly("x1^5")
        assert (nf.n, nf.m) == (5, 2)
        assert nf.beta0 == 1 and nf.omega0 == 1

    def test_flat_critical_curve(self):
        nf = normal_form(parse_poly("x2^2 + x1^4"), 16)
        assert nf.psi.poly.is_zero()
        assert nf.m is None
        assert nf.n == 4

    def test_example_with_binomial(self):
        phi = parse_poly("x2^2 + (x1+x2^2)^4")
        nf = normal_form(phi, 16)
        # oracle: solve d2 phi = 0 independently, substitute, read off the x1^4 coefficient
        d2 = phi.diff(1).swap()
        psi = solve_implicit(TruncatedSeries(d2), 16).poly.swap()
        assert nf.psi.poly == psi
        # d2 phi = x2 * (2 + 8 (x1 + x2^2)^3), so the curve is identically zero
        assert psi.order() is None or psi.order() >= 4
        assert nf.n == 4
        assert nf.b0.poly.coeff(4, 0) == 1
        x1 = TruncatedSeries(LatticePolynomial.monomial(1, 0, 1, phi.vars))
        assert compose(phi, x1, TruncatedSeries(psi), cap=16).poly == nf.b0.poly

    @pytest.mark.parametrize("text", ["x1^2", "x1^4", "x1^2 + x2^2", "x1*x2 + x2^2", "x2^2 + x1 + x1^4", "1 + x2^2"])
    def test_hessian_precondition_rejected(self, text):
        with pytest.raises(ClassificationError):
            classify(parse_poly(text))

    def test_flat_b0_rejected(self):
        with pytest.raises(ClassificationError, match="finite A-type"):
            normal_form(parse_poly("(x2 - x1^2)^2"), 12)


class TestSplit:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("(x2 - x1^2)^2 + x1^5", A_MINUS),
            ("x2^2 + x1^4", "A_plus"),
            ("(x2 - x1^2)^2 + x1^4", A_MINUS),  # boundary n = 2m
            ("(x2 - x1^3)^2 + x1^5", "A_plus"),
        ],
    )
    def test_split(self, text, expected):
        phi = parse_poly(text)
        assert split_class(normal_form(phi, 24), phi) == expected


class TestEffectiveData:
    def test_example_binomial_in_original_coordinates(self):
        eff = effective_data(parse_poly("x2^2 + (x1+x2^2)^4"))
        assert eff.kappa == (F(1, 4), F(1, 8))
        assert eff.n_e_coords == F(7, 2)

    def test_quadratic_coefficient_family(self):
        eff = effective_data(parse_poly("(1 + x1^2)*x2^2 + x1^4"))
        assert eff.kappa == (F(1, 4), F(1, 4))
        assert eff.n_e_coords == 3

    def test_vertical_edge(self):
        eff = effective_data(parse_poly("x2^2 + x1^5"))
        assert eff.kappa == (F(1, 5), 0)
        assert eff.vertical
        assert eff.n_e_coords == 5

    def test_missing_vertex(self):
        with pytest.raises(ClassificationError):
            effective_data(parse_poly("x2^2 + x1^4 + x1^5"), 5)


class TestLineAdapt:
    def test_binomial_shear_recovered(self):
        la = line_adapt(parse_poly("x2^2 + (x1+x2^2)^4"), 16)
        assert la.alpha.poly == parse_poly("-x2^2")
        assert la.n_e == 4

    def test_already_adapted(self):
        la = line_adapt(parse_poly("(1 + x1^2)*x2^2 + x1^4"), 16)
        assert la.alpha.poly.is_zero()
        assert la.n_e == 3

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_vertical_edge_needs_no_shear(self, n):
        la = line_adapt(parse_poly(f"x2^2 + x1^{n}"), 4 * n)
        assert la.alpha.poly.is_zero()
        assert not la.test_before.a
        assert la.n_e == n

    @pytest.mark.parametrize("text", ["x2^2 + (x1+x2^2)^4", "x2^2 + (x1 - 2*x2^3)^5", "x2^2 + (x1+x2)^4"])
    def test_fixed_point(self, text):
        la = line_adapt(parse_poly(text), 20)
        again = line_adapt(la.phi_la, 20)
        assert again.alpha.poly.is_zero()
        assert again.n_e == la.n_e


class TestDetectAe:
    def test_two_monomial_second_derivative_is_generic(self):
        p = parse_poly("x1^4 + x1^2*x2^2")
        assert not detect_Ae(p, (F(1, 4), F(1, 4)), 4).is_Ae

    def test_exceptional_form(self):
        p = parse_poly("x1^4 + 3*x1*x2^2")
        det = detect_Ae(p, (F(1, 4), F(3, 8)), 4)
        assert det.is_Ae and det.failed == "A1"

    def test_shifted_exceptional_form(self):
        full = parse_poly("(x1 - x2^2)^4 + 3*(x1 - x2^2)*x2^6")
        p = full.filter(lambda m: m[0] > 0)
        det = detect_Ae(p, (F(1, 4), F(1, 8)), 4)
        assert det.is_Ae and det.failed == "A2"
        assert det.u_shift == (1, 2)
        assert det.extype == parse_poly("x1^4 + 3*x1*x2^6")

    def test_geometric_example_lands_in_exceptional_form(self):
        rep = classify(parse_poly(geometric_x2_squared(5)), 20)
        assert rep.class_tag == A_E
        # the line-adapting shear already removes the c*y2^a offset, so (A1) is what fails
        assert rep.ae.failed == "A1"
        assert len(rep.ae.extype.diff(0, 2)) == 1


class TestClassifyGoldens:
    @pytest.mark.parametrize("text", sorted(GOLDEN_PLUS))
    def test_a_plus(self, text):
        rep = classify(parse_poly(text))
        n_e, p_e = GOLDEN_PLUS[text]
        assert rep.class_tag == A_PLUS
        assert rep.h == F(2 * rep.n, rep.n + 2)
        assert (rep.n_e, rep.p_e) == (n_e, p_e)
        assert rep.p_c == max(F(3, 2), p_e)

    @pytest.mark.parametrize("text", sorted(GOLDEN_MINUS))
    def test_a_minus(self, text):
        n = GOLDEN_MINUS[text]
        rep = classify(parse_poly(text))
        assert rep.class_tag == A_MINUS
        assert (rep.n, rep.m) == (n, 2)
        assert rep.h == F(2 * n, n + 2)
        assert rep.p_c == max(F(3, 2), F(2 * n, n + 2))

    def test_a_minus_listed_example(self):
        rep = classify(parse_poly("(x2 - x1^2)^2 + x1^5"))
        assert (rep.h, rep.p_c) == (F(10, 7), F(3, 2))

    def test_binomial_example_coordinates(self):
        rep = classify(parse_poly("x2^2 + (x1+x2^2)^4"))
        assert rep.n_e_x == F(7, 2)
        assert rep.n_e == 4
        assert not rep.flags["line_adapted_input"]
        assert rep.coord_chain[0].poly == parse_poly("-x2^2")

    def test_exceptional_linear_coefficient(self):
        rep = classify(parse_poly(GOLDEN_AE[0]))
        assert rep.class_tag == A_E
        assert rep.p_c == Interval(F(3, 2), F(5, 3))

    def test_exceptional_geometric(self):
        rep = classify(parse_poly(GOLDEN_AE[1]), 20)
        assert rep.class_tag == A_E
        assert (rep.n, rep.n_e, rep.p_e) == (5, 3, F(3, 2))
        assert rep.p_c == Interval(F(3, 2), F(5, 3))
        assert isinstance(rep.p_c, Interval)

    def test_kappa2_zero_is_flagged(self):
        rep = classify(parse_poly("x2^2 + x1^5"))
        assert rep.flags["kappa2_zero"]
        assert rep.notes

    def test_n3_uses_prior_result(self):
        rep = classify(parse_poly("x2^2 + x1^3"))
        assert rep.p_c == F(3, 2)
        assert rep.flags["n3_prior_result"]


ALL_GOLDEN = sorted(GOLDEN_PLUS) + sorted(GOLDEN_MINUS)


def _invariants(rep):
    return rep.n, rep.h, rep.class_tag, rep.n_e, rep.p_e, rep.p_c


@pytest.mark.parametrize("text", ["x2^2 + x1^4", "(1 + x1^2)*x2^2 + x1^4", "(x2 - x1^2)^2 + x1^5", "x2^2 + x1^5"])
@pytest.mark.parametrize("alpha", [{1: 1}, {2: F(-3, 2)}, {1: 2, 3: 1}])
def test_shear_invariance(text, alpha):
    phi = parse_poly(text)
    moved = shear_substitute(phi, shear(alpha)).poly
    assert _invariants(classify(moved)) == _invariants(classify(phi))


@pytest.mark.parametrize("text", ["x2^2 + x1^4", "(1 + x1^2)*x2^2 + x1^5", "x2^2 + (x1+x2^2)^4"])
def test_effective_multiplicity_is_maximal(text):
    phi = parse_poly(text)
    rep = classify(phi)
    rng = random.Random(text)
    for _ in range(50):
        alpha = {k: F(rng.randint(-5, 5), rng.randint(1, 4)) for k in rng.sample(range(1, 5), 2)}
        moved = shear_substitute(phi, shear(alpha)).poly
        assert effective_data(moved, rep.n).n_e_coords <= rep.n_e


@pytest.mark.parametrize("text", sorted(GOLDEN_PLUS))
def test_bounds(text):
    rep = classify(parse_poly(text))
    assert F(rep.n, 2) < rep.n_e <= rep.n
    assert rep.p_e == 2 * rep.n_e / (rep.n_e + 1)
    if rep.n >= 4:
        assert rep.p_e > rep.h
