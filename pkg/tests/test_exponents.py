import time
from fractions import Fraction

import pytest

from singscope.classify import Interval
from singscope.errors import ExponentError
from singscope.exponents import (
    E0_STEP1,
    EL_STEP1,
    EL_STEP1_PLUS,
    EL_STEP2,
    EdgeBudget,
    predicted_pc,
    summability_margins,
)
from singscope.pipeline import analyze
from singscope.poly import parse_poly

from conftest import GOLDEN_AE, GOLDEN_MINUS, GOLDEN_PLUS

F = Fraction

MINUS_EDGE = EdgeBudget(A=F(1), B=F(0), a=F(1, 3), a_tilde=F(1, 3), bound_const=F(2), n=5, label="edge")


def margins(budget, p, variant):
    return dict(summability_margins(budget, p, variant))


def limit_at(budget, variant, name, p):
    """Exact value of an affine-in-1/p margin at p, from two interior samples."""
    p1, p2 = F(8, 5), F(9, 5)
    v1, v2 = margins(budget, p1, variant)[name], margins(budget, p2, variant)[name]
    u1, u2, u = 1 / p1, 1 / p2, 1 / F(p)
    return v1 + (v2 - v1) * (u - u1) / (u2 - u1)


class TestMargins:
    def test_a_minus_edge(self):
        got = margins(MINUS_EDGE, F(8, 5), EL_STEP1)
        assert got["crucsum_first"] == F(-1, 2)
        assert got["crucsum_second"] == F(-3, 8)

    def test_a_minus_edge_near_three_halves(self):
        assert limit_at(MINUS_EDGE, EL_STEP1, "crucsum_first", F(3, 2)) == F(-1, 3)
        assert margins(MINUS_EDGE, F(3, 2) + F(1, 10**6), EL_STEP1)["crucsum_first"] < 0

    def test_a_plus_critical_at_p_e(self):
        # (A - 1)/a_tilde + B + 2 = 3 = n_e
        b = EdgeBudget(A=F(2), B=F(0), a=F(1), a_tilde=F(1), bound_const=F(3), n=4, plus=True)
        assert b.lemma_value() == 3
        assert limit_at(b, EL_STEP1_PLUS, "crucsum_first", F(3, 2)) == 0
        assert margins(b, F(3, 2) + F(1, 100), EL_STEP1_PLUS)["crucsum_first"] < 0

    def test_outer_region_variant(self):
        b = EdgeBudget(A=F(0), B=F(3), a=F(1, 3), a_tilde=F(1, 3), bound_const=F(2), n=5)
        got = margins(b, F(8, 5), E0_STEP1)
        # (2^{jn - k})^{2/p - 1} 2^{-j} maximized at k = j/a: (n - 1/a)(2/p - 1) - 1
        assert got["suminjk2_first"] == (5 - 3) * (F(5, 4) - 1) - 1
        assert got["suminjk2_second"] == 5 * (F(5, 8) - F(1, 2)) - 1

    def test_step_two_has_four_sums(self):
        assert len(margins(MINUS_EDGE, F(8, 5), EL_STEP2)) == 4

    @pytest.mark.parametrize("p", [F(3, 2), F(2), F(1), F(5, 2)])
    def test_p_outside_open_range(self, p):
        with pytest.raises(ExponentError):
            summability_margins(MINUS_EDGE, p, EL_STEP1)

    def test_unknown_variant(self):
        with pytest.raises(ExponentError):
            summability_margins(MINUS_EDGE, F(8, 5), "E_7")

    def test_malformed_budget(self):
        bad = EdgeBudget(A=F(1), B=F(0), a=F(1), a_tilde=F(-1), bound_const=F(2), n=5)
        with pytest.raises(ExponentError):
            summability_margins(bad, F(8, 5), EL_STEP1)


AGREEING = sorted(GOLDEN_PLUS) + sorted(GOLDEN_MINUS)


@pytest.mark.parametrize("text", AGREEING)
def test_predicted_pc_matches_classification(text):
    t0 = time.perf_counter()
    a = analyze(parse_poly(text))
    summ = predicted_pc(a.resolution, a.classification)
    elapsed = time.perf_counter() - t0
    assert summ.predicted_pc == a.classification.p_c
    assert summ.agrees
    assert abs(summ.bisection_pc - summ.predicted_pc) <= F(1, 1000)
    probe = summ.predicted_pc + F(1, 100)
    assert all(v < 0 for _, _, v in summ.margins_at(probe))
    assert elapsed < 1.0


@pytest.mark.parametrize(
    "text, expected",
    [("(x2 - x1^2)^2 + x1^5", F(3, 2)), ("(1 + x1^2)*x2^2 + x1^4", F(3, 2)), ("x2^2 + x1^5", F(5, 3))],
)
def test_listed_values(text, expected):
    a = analyze(parse_poly(text))
    assert a.summability.predicted_pc == expected


@pytest.mark.parametrize("text", AGREEING + GOLDEN_AE)
def test_margins_decrease_in_p(text):
    summ = analyze(parse_poly(text)).summability
    grid = [F(3, 2) + F(k, 40) for k in range(1, 20)]
    for _, _, m in summ.margins:
        values = [m.at(p) for p in grid]
        assert all(x > y for x, y in zip(values, values[1:])), m.name


@pytest.mark.parametrize("text", AGREEING)
def test_lemma_consistency_holds(text):
    summ = analyze(parse_poly(text)).summability
    assert all(value <= bound for _, value, bound in summ.lemma_checks)


@pytest.mark.parametrize("text", GOLDEN_AE)
def test_exceptional_prediction_inside_interval(text):
    a = analyze(parse_poly(text))
    assert isinstance(a.classification.p_c, Interval)
    assert a.summability.agrees is None
    assert a.summability.predicted_pc in a.classification.p_c
