"""Newton polyhedra of (fractional) supports: vertices, edges, weights, distance."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import GeometryError
from .poly.lattice import LatticePolynomial

Point = tuple[Fraction, Fraction]
Weight = tuple[Fraction, Fraction]


def _pt(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


@dataclass(frozen=True)
class Edge:
    """Compact edge joining vertex ``index`` (left, higher) to vertex ``index - 1``."""

    index: int
    left: Point
    right: Point
    kappa: Weight

    @property
    def slope(self) -> Fraction | None:
        """Modulus of the slope; None encodes a vertical edge (infinite slope)."""
        k1, k2 = self.kappa
        return None if k2 == 0 else k1 / k2

    @property
    def width(self) -> Fraction:
        return self.right[0] - self.left[0]

    def contains(self, point) -> bool:
        t1, t2 = _pt(point)
        k1, k2 = self.kappa
        return k1 * t1 + k2 * t2 == 1 and self.left[0] <= t1 <= self.right[0]


def weight_through(p: Point, q: Point) -> Weight:
    """Weight (k1, k2) of the line through p and q normalised to k.t = 1."""
    (b1, a1), (b2, a2) = p, q
    det = b1 * a2 - b2 * a1
    if det == 0:
        raise GeometryError("line through the points passes through the origin")
    return ((a2 - a1) / det, (b1 - b2) / det)


@dataclass(frozen=True)
class NewtonPolyhedron:
    """Ordered vertices (B_0, A_0), ..., (B_L, A_L): B strictly decreasing, A increasing."""

    vertices: tuple[Point, ...]
    edges: tuple[Edge, ...]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge(self, l: int) -> Edge:
        if not 1 <= l <= len(self.edges):
            raise GeometryError(f"edge {l} does not exist (polyhedron has {len(self.edges)})")
        return self.edges[l - 1]

    def slopes(self) -> list[Fraction]:
        return [e.slope for e in self.edges]

    @property
    def vertical_weight(self) -> Weight | None:
        """Weight of the unbounded vertical edge above the last vertex (kappa_2 = 0)."""
        b, _ = self.vertices[-1]
        return None if b == 0 else (1 / b, Fraction(0))

    @property
    def horizontal_weight(self) -> Weight | None:
        _, a = self.vertices[0]
        return None if a == 0 else (Fraction(0), 1 / a)

    def boundary_height(self, t1) -> Fraction:
        """Lowest t2 of the polyhedron over the abscissa t1 (inf left of the last vertex)."""
        t1 = Fraction(t1)
        vs = self.vertices
        if t1 < vs[-1][0]:
            raise GeometryError("abscissa left of the polyhedron")
        if t1 >= vs[0][0]:
            return vs[0][1]
        for e in self.edges:
            if e.left[0] <= t1 <= e.right[0]:
                k1, k2 = e.kappa
                return (1 - k1 * t1) / k2
        raise GeometryError("boundary lookup failed")

    def contains(self, point) -> bool:
        t1, t2 = _pt(point)
        if t1 < self.vertices[-1][0]:
            return False
        return t2 >= self.boundary_height(t1)

    def to_json(self) -> dict:
        return {
            "vertices": [[_fmt(b), _fmt(a)] for b, a in self.vertices],
            "edges": [
                {
                    "index": e.index,
                    "kappa": [_fmt(e.kappa[0]), _fmt(e.kappa[1])],
                    "slope": None if e.slope is None else _fmt(e.slope),
                }
                for e in self.edges
            ],
        }


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polyhedron(support: Iterable) -> NewtonPolyhedron:
    """Lower-left staircase hull of the union of positive quadrants at the support."""
    pts = sorted({_pt(p) for p in support})
    if not pts:
        raise GeometryError("empty support has no Newton polyhedron")
    for t1, t2 in pts:
        if t1 < 0 or t2 < 0:
            raise GeometryError("support points must lie in the closed positive quadrant")
    # Pareto-minimal points, t1 increasing and t2 strictly decreasing
    front: list[Point] = []
    best = None
    for p in pts:
        if best is None or p[1] < best:
            front.append(p)
            best = p[1]
    hull: list[Point] = []
    for p in front:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    vertices = tuple(reversed(hull))
    edges = tuple(
        Edge(l, vertices[l], vertices[l - 1], weight_through(vertices[l], vertices[l - 1]))
        for l in range(1, len(vertices))
    )
    return NewtonPolyhedron(vertices, edges)


def polyhedron_of(p: LatticePolynomial) -> NewtonPolyhedron:
    return newton_polyhedron(p.support())


def newton_distance(np_: NewtonPolyhedron) -> Fraction:
    """The d with (d, d) on the boundary of the polyhedron."""
    vs = np_.vertices
    b0, a0 = vs[0]
    if a0 >= b0:
        return a0  # the horizontal ray (or the vertex itself) meets the diagonal
    bl, al = vs[-1]
    if bl >= al:
        return bl  # the vertical ray
    for e in np_.edges:
        (bl_, al_), (br, ar) = e.left, e.right
        if bl_ - al_ <= 0 <= br - ar:
            k1, k2 = e.kappa
            return 1 / (k1 + k2)
    raise GeometryError("bisectrix does not meet the boundary")


def weighted_degree(mono, kappa: Weight) -> Fraction:
    return kappa[0] * mono[0] + kappa[1] * mono[1]


def principal_part(p: LatticePolynomial, kappa) -> LatticePolynomial:
    """Terms of minimal kappa-degree."""
    k1, k2 = Fraction(kappa[0]), Fraction(kappa[1])
    if k1 < 0 or k2 < 0 or (k1 == 0 and k2 == 0):
        raise GeometryError("weight must be non-negative and nonzero")
    if p.is_zero():
        raise GeometryError("principal part of the zero polynomial")
    low = min(weighted_degree(m, (k1, k2)) for m in p.terms)
    return p.filter(lambda m: weighted_degree(m, (k1, k2)) == low)


def n_kappa(kappa, point) -> Fraction:
    """(A-1)/a + B + 2 for a point on the line k.t = 1, equal to (1-k2)/k1 + 2."""
    k1, k2 = Fraction(kappa[0]), Fraction(kappa[1])
    b, a = _pt(point)
    if k1 <= 0:
        raise GeometryError("kappa_1 must be positive")
    if k1 * b + k2 * a != 1:
        raise GeometryError(f"point {point} is not on the line {k1}*t1 + {k2}*t2 = 1")
    closed = (1 - k2) / k1 + 2
    if k2 == 0:
        return b + 2  # infinite slope: the A-term drops out
    slope = k1 / k2
    via_slope = (a - 1) / slope + b + 2
    if via_slope != closed:
        raise GeometryError("inconsistent n_kappa formulas")
    return via_slope


@dataclass(frozen=True)
class KeyInequality:
    holds: bool
    values: list[Fraction]


def key_inequality_holds(np_: NewtonPolyhedron) -> KeyInequality:
    """n_kappa along the compact edges is non-increasing (requires A_1 >= 1)."""
    if not np_.edges:
        raise GeometryError("no compact edge: A_1 is undefined")
    a1 = np_.vertices[1][1]
    if a1 < 1:
        raise GeometryError(f"A_1 = {a1} < 1; route through the multiplicity-lemma branch")
    values = [n_kappa(e.kappa, e.left) for e in np_.edges]
    holds = all(x >= y for x, y in zip(values, values[1:]))
    return KeyInequality(holds, values)
