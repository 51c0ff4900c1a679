from fractions import Fraction

import pytest

from singscope.poly import parse_poly

EX_2_6_ORDER = 20


def geometric_x2_squared(n: int, order: int = EX_2_6_ORDER) -> str:
    """x2^2/(1 - x1) + x1^n expanded through total degree ``order``."""
    terms = [f"x1^{k}*x2^2" for k in range(order - 1)]
    return " + ".join(terms) + f" + x1^{n}"


GOLDEN_PLUS = {
    # expression: (n_e, p_e)
    **{f"x2^2 + x1^{n}": (Fraction(n), Fraction(2 * n, n + 1)) for n in range(4, 9)},
    "x2^2 + (x1+x2^2)^4": (Fraction(4), Fraction(8, 5)),
    "(1 + x1^2)*x2^2 + x1^5": (Fraction(7, 2), Fraction(14, 9)),
    "(1 + x1^2)*x2^2 + x1^4": (Fraction(3), Fraction(3, 2)),
}
GOLDEN_MINUS = {f"(x2 - x1^2)^2 + x1^{n}": n for n in (5, 6)}
GOLDEN_AE = ["(1 + x1)*x2^2 + x1^5", geometric_x2_squared(5)]


@pytest.fixture
def poly():
    return parse_poly
