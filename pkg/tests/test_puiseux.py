import math
import random
from fractions import Fraction

import pytest

from singscope.classify import A_MINUS
from singscope.errors import GeometryError, PuiseuxError
from singscope.pipeline import analyze
from singscope.poly import parse_poly
from singscope.puiseux import (
    CASE1,
    FULL_COLLAPSE,
    NO_HIGH_MULT,
    SIMPLE_ROOTS,
    SUBCASE_I,
    SUBCASE_II,
    PuiseuxPoly,
    cluster_tree,
    conjugate_closed,
    edge_factorizations,
    followed_multiplicities_nonincreasing,
    second_antiderivative_roundtrip,
    second_antiderivative_coefficients,
    multiplicity_lemma_classify,
    phase_second_derivative,
    principal_part_of_edge,
    puiseux_roots,
    resolve,
    root_residual,
    transition_factorization_check,
    vertex_data,
)
from singscope.puiseux.resolve import _case2_tag
from singscope.poly import LatticePolynomial, TruncatedSeries

from conftest import GOLDEN_MINUS, GOLDEN_PLUS
from corpora import HOMOGENEOUS, RANDOM_PRODUCTS, oracle, pp, to_lattice

F = Fraction
ZS = ("z", "s")


def lp(text: str) -> LatticePolynomial:
    return parse_poly(text, aliases={"z": "x1", "s": "x2"})


CUBIC = pp((3, 0, 20), (0, 1, 2))  # 20 z^3 + 2 s
DOUBLE = pp((3, 0, 1), (1, 2, -3), (0, 3, 2))  # (z - s)^2 (z + 2 s)
SQRT = pp((2, 0, 1), (0, 3, -1))  # z^2 - s^3


class TestSecondDerivative:
    def test_a_minus_image(self):
        Phi = phase_second_derivative(TruncatedSeries(parse_poly("x1^5 + x2*x1^2")))
        assert Phi.poly.terms == {(3, 0): 20, (0, 1): 2}

    def test_pure(self):
        assert phase_second_derivative(TruncatedSeries(parse_poly("x1^4"))).poly.terms == {(2, 0): 12}

    def test_rescaled_quadratic(self):
        c = F(-1, 2)
        Phi = phase_second_derivative(TruncatedSeries(parse_poly("x1^4") + parse_poly("x1^2*x2^2") * c**2))
        assert Phi.poly.terms == {(2, 0): 12, (0, 2): 2 * c**2}


class TestRoots:
    def test_square_root_branch(self):
        roots = puiseux_roots(SQRT)
        got = sorted((r.series.terms[0][0], complex(r.series.terms[0][1]).real, r.multiplicity) for r in roots)
        assert got == [(F(3, 2), -1.0, 1), (F(3, 2), 1.0, 1)]
        assert all(r.series.ramification == 2 for r in roots)

    def test_double_root_model(self):
        roots = puiseux_roots(DOUBLE)
        got = sorted((r.series.terms[0][0], F(r.series.terms[0][1]), r.multiplicity) for r in roots)
        assert got == [(1, -2, 1), (1, 1, 2)]

    def test_cube_roots(self):
        roots = puiseux_roots(CUBIC)
        assert len(roots) == 3
        real = [r for r in roots if r.series.is_real]
        assert len(real) == 1
        c = complex(real[0].series.terms[0][1]).real
        assert c == pytest.approx(-(0.1 ** (1 / 3)), rel=1e-12)
        assert c == pytest.approx(-0.46416, abs=1e-5)
        for r in roots:
            assert root_residual(CUBIC, r) < 1e-9

    def test_zero_polynomial_rejected(self):
        with pytest.raises(PuiseuxError):
            puiseux_roots(PuiseuxPoly({}))


class TestClusters:
    def test_cube_roots_form_one_cluster(self):
        tree = cluster_tree(puiseux_roots(CUBIC))
        assert len(tree.clusters) == 1
        cl = tree.clusters[0]
        assert cl.leading_exponent == F(1, 3)
        assert [ch.multiplicity for ch in cl.children] == [1, 1, 1]
        assert sum(ch.real for ch in cl.children) == 1
        assert conjugate_closed(tree)

    def test_square_root_cluster(self):
        tree = cluster_tree(puiseux_roots(SQRT))
        (cl,) = tree.clusters
        assert cl.leading_exponent == F(3, 2)
        assert all(ch.real for ch in cl.children) and len(cl.children) == 2

    def test_double_root_cluster(self):
        tree = cluster_tree(puiseux_roots(DOUBLE))
        (cl,) = tree.clusters
        assert {F(ch.coefficient): ch.multiplicity for ch in cl.children} == {1: 2, -2: 1}

    @pytest.mark.parametrize(
        "poly, expected",
        [
            (CUBIC, [(3, 0), (0, 1)]),
            (DOUBLE, [(3, 0), (0, 3)]),
            (SQRT, [(2, 0), (0, 3)]),
        ],
    )
    def test_vertex_data(self, poly, expected):
        assert vertex_data(cluster_tree(puiseux_roots(poly))).vertices == expected

    def test_accounting(self):
        poly = pp((5, 0, 1), (3, 1, -1))  # z^3 (z^2 - s)
        tree = cluster_tree(puiseux_roots(poly))
        assert tree.nu1 == 3
        assert tree.total == 5


class TestEdgeFactorization:
    def test_cubic(self):
        fac = principal_part_of_edge(CUBIC, 1)
        assert fac.constant == 20
        assert sum(r.multiplicity for r in fac.factors) == 3
        assert fac.max_rel_error < 1e-8

    def test_complex_pair(self):
        c = F(-1, 2)
        fac = principal_part_of_edge(pp((2, 0, 12), (0, 2, 2 * c**2)), 1)
        values = sorted(complex(r.value).imag for r in fac.factors)
        assert values[1] == pytest.approx(abs(float(c)) / math.sqrt(6), rel=1e-12)
        assert values[0] == pytest.approx(-values[1])

    def test_no_compact_edge(self):
        assert edge_factorizations(pp((2, 0, 1))) == []
        with pytest.raises(GeometryError):
            principal_part_of_edge(pp((2, 0, 1)), 1)


class TestShift:
    def test_real_root_shift(self):
        c = complex(next(r for r in puiseux_roots(CUBIC) if r.series.is_real).series.terms[0][1]).real
        shifted = CUBIC.shift(c, F(1, 3))
        assert list(shifted.polyhedron().vertices) == [(3, 0), (1, F(2, 3))]

    def test_non_root_shift_keeps_pure_power(self):
        shifted = CUBIC.shift(F(2), F(1, 3))
        verts = shifted.polyhedron().vertices
        assert verts[-1][0] == 0 and verts[-1][1] >= 1
        assert shifted.coeff(0, 1) == 20 * 8 + 2

    def test_collapse_to_monomial(self):
        P = pp((2, 0, 1), (1, 1, -2), (0, 2, 1))  # (z - s)^2
        shifted = P.shift(F(1), F(1))
        assert shifted.terms == {(2, F(0)): 1}
        assert _case2_tag(shifted, (F(1, 2), F(1, 2)))[0] == SUBCASE_II


class TestResolve:
    def test_a_minus_stops_at_step_one(self):
        a = analyze(parse_poly("(x2 - x1^2)^2 + x1^5"))
        steps = a.resolution
        assert [s.step_index for s in steps] == [1]
        assert [e.slope for e in steps[0].polyhedron.edges] == [F(1, 3)]
        real = [b for b in steps[0].branches if b.case_tag != CASE1]
        assert len(real) == 1 and real[0].multiplicity == 1
        assert steps[0].stopped

    def test_double_root_stops_at_step_two(self):
        steps = resolve(DOUBLE)
        assert [s.step_index for s in steps] == [1, 2]
        followed = [b for b in steps[0].branches if b.action == "follow"]
        assert len(followed) == 1
        assert F(followed[0].coefficient) == 1 and followed[0].multiplicity == 2
        assert followed[0].case_tag == SUBCASE_I
        last = steps[1]
        assert last.stopped and last.column_limit == 2
        assert last.stop_reason.startswith("single_real_root")

    def test_no_nontrivial_roots(self):
        assert resolve(pp((2, 0, 12))) == []

    def test_step_cap(self):
        with pytest.raises(PuiseuxError):
            resolve(DOUBLE, max_steps=1)

    @pytest.mark.parametrize("text", sorted(GOLDEN_MINUS) + sorted(GOLDEN_PLUS) + ["(1 + x1)*x2^2 + x1^5"])
    def test_goldens_terminate_with_dual_vertices(self, text):
        a = analyze(parse_poly(text))
        assert len(a.resolution) <= 20
        assert followed_multiplicities_nonincreasing(a.resolution)
        for st in a.resolution:
            assert st.checks["vertex_duality"]
            slopes = [e.slope for e in st.polyhedron.edges]
            assert slopes == sorted(set(slopes))
            if st.checks["A1_ge_1"] is False:
                assert st.checks["A1_lt_1_admitted"]
        if a.resolution:
            roots = puiseux_roots(a.Phi)
            assert max(root_residual(a.Phi, r) for r in roots) < 1e-9


@pytest.mark.parametrize(
    "text, slope",
    [
        ("(x2 - x1^2)^2 + x1^5", F(1, 3)),  # 1/(n - m)
        ("(x2 - x1^2)^2 + x1^6", F(1, 4)),
        ("(1 + x1^2)*x2^2 + x1^4", F(1)),  # 1/(n - n_e)
        ("(1 + x1^2)*x2^2 + x1^5", F(2, 3)),
    ],
)
def test_first_slope_law(text, slope):
    a = analyze(parse_poly(text))
    rep = a.classification
    expected = F(1, rep.n - rep.m) if rep.class_tag == A_MINUS else 1 / (rep.n - rep.n_e)
    assert expected == slope
    assert a.resolution[0].polyhedron.edges[0].slope == slope


class TestTransition:
    def test_outer_region(self):
        tc = transition_factorization_check(CUBIC, 0)
        assert tc.vertex == (3, 0)
        assert 18 <= tc.ratio_min <= tc.ratio_max <= 22
        assert tc.verdict == "PASS"

    def test_inner_region(self):
        tc = transition_factorization_check(CUBIC, 1)
        assert tc.vertex == (0, 1)
        assert 1.8 <= tc.ratio_min <= tc.ratio_max <= 2.2

    def test_monomial(self):
        tc = transition_factorization_check(pp((2, 0, 1)), 0)
        assert tc.ratio_min == pytest.approx(1.0) and tc.ratio_max == pytest.approx(1.0)

    def test_missing_region(self):
        with pytest.raises(PuiseuxError):
            transition_factorization_check(CUBIC, 2)

    def test_seeded(self):
        assert transition_factorization_check(DOUBLE, 0, seed=3) == transition_factorization_check(DOUBLE, 0, seed=3)


# ---------------------------------------------------------------- duality on random products


@pytest.mark.parametrize("index", range(40))
def test_polyhedron_cluster_duality(index):
    poly = RANDOM_PRODUCTS[index]
    roots = puiseux_roots(poly)
    tree = cluster_tree(roots)
    assert vertex_data(tree).vertices == list(poly.polyhedron().vertices)
    assert tree.total == poly.degree_z()
    assert conjugate_closed(tree)
    assert max(root_residual(poly, r) for r in roots) < 1e-9


# ---------------------------------------------------------------- multiplicity lemma


class TestMultiplicityLemmaExamples:
    def test_full_collapse(self):
        P = lp("(z - s)^3")
        assert multiplicity_lemma_classify(P, (F(1, 3), F(1, 3))).tag == FULL_COLLAPSE

    def test_simple_roots(self):
        P = lp("z*(z^2 - s^3)")
        branch = multiplicity_lemma_classify(P, (F(1, 3), F(2, 9)))
        assert branch.tag == SIMPLE_ROOTS
        assert branch.real_root_multiplicities == [1]  # one root t = 1 of Q, i.e. y1 = +-y2^(3/2)

    def test_no_real_root(self):
        branch = multiplicity_lemma_classify(lp("12*z^2 + 2*s^2"), (F(1, 2), F(1, 2)))
        assert branch.tag == NO_HIGH_MULT
        assert branch.real_root_multiplicities == []

    def test_not_homogeneous(self):
        with pytest.raises(PuiseuxError):
            multiplicity_lemma_classify(lp("z^3 + s^2"), (F(1, 3), F(1, 3)))


@pytest.mark.parametrize("index", range(200))
def test_multiplicity_lemma_against_factorization(index):
    expr, kappa, d = HOMOGENEOUS[index]
    expected = oracle(expr, kappa, d)
    P = to_lattice(expr)
    if expected == "error":
        with pytest.raises(PuiseuxError):
            multiplicity_lemma_classify(P, kappa)
        return
    branch = multiplicity_lemma_classify(P, kappa)
    assert branch.tag == expected
    assert branch.n_e_minus_2 == (1 - kappa[1]) / kappa[0]
    if expected == SIMPLE_ROOTS:
        assert all(m == 1 for m in branch.real_root_multiplicities)


def test_lemma_suite_mixes_branches():
    tags = {oracle(*h) for h in HOMOGENEOUS}
    assert {FULL_COLLAPSE, SIMPLE_ROOTS, NO_HIGH_MULT} <= tags


# ---------------------------------------------------------------- antiderivative reconstruction


@pytest.mark.parametrize("seed", range(20))
def test_second_antiderivative_reconstruction(seed):
    rng = random.Random(seed)
    B = rng.randint(0, 5)
    V = {k: F(rng.randint(-9, 9), rng.randint(1, 5)) for k in rng.sample(range(-B, 8), 4) if B + k + 1 != 0}
    U = second_antiderivative_coefficients(V, B)
    # independent check: differentiate sum U_k z^(B+2+k) twice by hand
    for k, u in U.items():
        e = B + 2 + k
        assert u * e * (e - 1) == V[k]
    assert second_antiderivative_roundtrip(V, B)


def test_second_antiderivative_pole():
    with pytest.raises(PuiseuxError):
        second_antiderivative_coefficients({-1: F(1)}, 0)
