"""Newton-Puiseux expansion of the roots z(s) and the cluster tree they form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from ..errors import PuiseuxError
from ..newton import Edge, NewtonPolyhedron, newton_polyhedron
from ..poly import univariate as up
from .ppoly import Number, PuiseuxPoly, _fmt_number, _is_exact

REAL_TOL = 1e-9
SEPARATION_TOL = 1e-6
RESIDUAL_TOL = 1e-9


def is_real(c: Number) -> bool:
    if _is_exact(c):
        return True
    c = complex(c)
    return abs(c.imag) <= REAL_TOL * abs(c)


def _close(c1: Number, c2: Number) -> bool:
    z1, z2 = complex(c1), complex(c2)
    return abs(z1 - z2) <= SEPARATION_TOL * max(abs(z1), abs(z2))


# ---------------------------------------------------------------- edge roots


@dataclass(frozen=True)
class EdgeRoot:
    value: Number
    multiplicity: int
    real: bool

    @property
    def exact(self) -> bool:
        return _is_exact(self.value)


def edge_polynomial(poly: PuiseuxPoly, edge: Edge) -> list[Number]:
    """Ascending coefficients in t of the terms on the edge, with z = t s^slope."""
    left = int(edge.left[0])
    width = int(edge.right[0]) - left
    coeffs: list[Number] = [Fraction(0)] * (width + 1)
    for (k, _), c in poly.on_line(edge.kappa):
        if left <= k <= left + width:
            coeffs[k - left] = c
    return coeffs


def _canonical(c: complex) -> tuple[Number, bool]:
    if abs(c.imag) <= REAL_TOL * abs(c):
        return complex(c.real, 0.0), True
    if abs(c.real) <= REAL_TOL * abs(c):
        return complex(0.0, c.imag), False
    return c, False


def _check_separated(values: list[Number]) -> None:
    for i, a in enumerate(values):
        for b in values[i + 1:]:
            if _close(a, b):
                raise PuiseuxError(
                    f"coefficient-root conditioning failure: roots {_fmt_number(a)} and "
                    f"{_fmt_number(b)} closer than the separation tolerance"
                )


def _roots_exact(coeffs: list[Fraction]) -> list[EdgeRoot]:
    out: list[EdgeRoot] = []
    for factor, mult in up.squarefree_decomposition(coeffs):
        if len(factor) == 2:
            out.append(EdgeRoot(-factor[0] / factor[1], mult, True))
            continue
        for r in up.numeric_roots(factor):
            v, real = _canonical(complex(r))
            out.append(EdgeRoot(v, mult, real))
    _check_separated([r.value for r in out])
    return out


def _derivative_small(coeffs: np.ndarray, x: complex, upto: int) -> bool:
    """p, p', ..., p^(upto-1) all vanish at x relative to the term sizes."""
    desc = coeffs[::-1]
    for _ in range(upto):
        terms = np.abs(desc) * np.abs(x) ** np.arange(len(desc) - 1, -1, -1)
        if abs(np.polyval(desc, x)) > 1e-7 * max(terms.sum(), 1e-300):
            return False
        desc = np.polyder(desc)
    return True


def _roots_numeric(coeffs: list[Number]) -> list[EdgeRoot]:
    arr = np.array([complex(c) for c in coeffs], dtype=complex)
    roots = list(np.roots(arr[::-1]))
    groups: list[list[complex]] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        for g in groups:
            if abs(r - np.mean(g)) <= 1e-4 * max(abs(r), 1e-300):
                g.append(r)
                break
        else:
            groups.append([r])
    out: list[EdgeRoot] = []
    for g in groups:
        centre = complex(np.mean(g))
        if len(g) > 1 and not _derivative_small(arr, centre, len(g)):
            for r in g:
                v, real = _canonical(complex(r))
                out.append(EdgeRoot(v, 1, real))
            continue
        v, real = _canonical(centre)
        out.append(EdgeRoot(v, len(g), real))
    _check_separated([r.value for r in out])
    return out


def edge_roots(poly: PuiseuxPoly, edge: Edge) -> list[EdgeRoot]:
    """Nonzero roots of the edge polynomial with multiplicities, sorted by (Re, Im)."""
    coeffs = edge_polynomial(poly, edge)
    if all(_is_exact(c) for c in coeffs):
        roots = _roots_exact([Fraction(c) for c in coeffs])
    else:
        roots = _roots_numeric(coeffs)
    if sum(r.multiplicity for r in roots) != len(coeffs) - 1:
        raise PuiseuxError("edge polynomial root count does not match its width")
    return sorted(roots, key=lambda r: (complex(r.value).real, complex(r.value).imag))


def certifies(poly: PuiseuxPoly, edge: Edge, column_limit: int) -> bool:
    """No unknown term can fall on or below the edge's line over columns [0, column_limit]."""
    v = poly.validity
    if v.exact:
        return True
    k1, k2 = edge.kappa
    for k in (0, column_limit):
        line = (1 - k1 * k) / k2
        if v.limit(k) < line:
            return False
    return True


# ---------------------------------------------------------------- series


@dataclass(frozen=True)
class PuiseuxSeries:
    """sum c_i s^{e_i}; ``complete`` means the root equals this finite sum."""

    terms: tuple[tuple[Fraction, Number], ...]
    complete: bool = False

    def __post_init__(self):
        exps = [e for e, _ in self.terms]
        if any(b <= a for a, b in zip(exps, exps[1:])) or any(e <= 0 for e in exps):
            raise PuiseuxError("Puiseux exponents must be positive and strictly increasing")

    @property
    def depth(self) -> int:
        return len(self.terms)

    @property
    def ramification(self) -> int:
        return lcm(1, *(e.denominator for e, _ in self.terms))

    @property
    def is_real(self) -> bool:
        return all(is_real(c) for _, c in self.terms)

    @property
    def leading_exponent(self) -> Fraction | None:
        return self.terms[0][0] if self.terms else None

    def coefficients(self) -> list[complex]:
        return [complex(c) for _, c in self.terms]

    def evaluate(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, dtype=complex)
        for e, c in self.terms:
            out = out + complex(c) * s ** float(e)
        return out

    def extend(self, exponent: Fraction, c: Number) -> "PuiseuxSeries":
        return PuiseuxSeries(self.terms + ((Fraction(exponent), c),))

    def to_json(self) -> dict:
        return {
            "ramification": self.ramification,
            "depth": self.depth,
            "complete": self.complete,
            "terms": [
                {"exponent": f"{e.numerator}/{e.denominator}", "coefficient": _coef_json(c)}
                for e, c in self.terms
            ],
        }

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({_fmt_number(c)})*s^{e}" for e, c in self.terms)


def _coef_json(c: Number):
    if _is_exact(c):
        q = Fraction(c)
        return {"exact": f"{q.numerator}/{q.denominator}"}
    c = complex(c)
    return {"re": float(c.real), "im": float(c.imag)}


@dataclass(frozen=True)
class RootExpansion:
    series: PuiseuxSeries
    multiplicity: int


def _region_polygon(poly: PuiseuxPoly, column_limit: int) -> NewtonPolyhedron:
    pts = [m for m in poly.terms if m[0] <= column_limit]
    if not pts:
        raise PuiseuxError("no terms in the cluster region")
    return newton_polyhedron(pts)


def _expand(
    poly: PuiseuxPoly,
    column_limit: int,
    min_slope: Fraction | None,
    prefix: PuiseuxSeries,
    depth_left: int,
    out: list[RootExpansion],
) -> None:
    polygon = _region_polygon(poly, column_limit)
    right_col = int(polygon.vertices[0][0])
    if right_col != column_limit:
        raise PuiseuxError(
            f"coefficient-root conditioning failure: expected a vertex in column {column_limit}"
        )
    nu = int(polygon.vertices[-1][0])
    if nu > 0:
        out.append(RootExpansion(PuiseuxSeries(prefix.terms, poly.is_exact), nu))
    for edge in polygon.edges:
        a = edge.slope
        if min_slope is not None and a <= min_slope:
            raise PuiseuxError("coefficient-root conditioning failure: slope did not increase")
        if not certifies(poly, edge, column_limit):
            if not prefix.terms:
                raise PuiseuxError("depth unreachable within series validity: leading edge uncertified")
            out.append(RootExpansion(prefix, int(edge.width)))
            continue
        for root in edge_roots(poly, edge):
            series = prefix.extend(a, root.value)
            if depth_left <= 1:
                out.append(RootExpansion(series, root.multiplicity))
                continue
            shifted = poly.shift(root.value, a)
            _expand(shifted, root.multiplicity, a, series, depth_left - 1, out)


def as_ppoly(psi) -> PuiseuxPoly:
    return psi if isinstance(psi, PuiseuxPoly) else PuiseuxPoly.from_series(psi)


def puiseux_roots(psi, depth: int = 6) -> list[RootExpansion]:
    """All small roots z(s) of psi (trivial roots z = 0 included), expanded to ``depth`` terms."""
    poly = as_ppoly(psi)
    if poly.is_zero():
        raise PuiseuxError("cannot expand the roots of the zero polynomial")
    if depth < 1:
        raise PuiseuxError("depth must be at least 1")
    column_limit = int(poly.polyhedron().vertices[0][0])
    out: list[RootExpansion] = []
    _expand(poly, column_limit, None, PuiseuxSeries(()), depth, out)
    return out


def shifted_by(psi, series: PuiseuxSeries) -> tuple[PuiseuxPoly, float]:
    """psi(z + series, s) and the worst relative cancellation seen on the way."""
    g = as_ppoly(psi)
    worst = 0.0
    for e, c in series.terms:
        g = g.shift(c, e)
        worst = max([worst, *g.cancelled.values()])
    return g, worst


def root_residual(psi, root: RootExpansion) -> float:
    """Relative size of the coefficients that must cancel once the series is substituted."""
    g, worst = shifted_by(psi, root.series)
    r = root.multiplicity
    if not root.series.terms:
        return worst
    last = root.series.terms[-1][0]
    col_r = [e for (k, e) in g.terms if k == r]
    if not col_r:
        return worst
    anchor = min(col_r) + last * r
    for (k, e), c in g.terms.items():
        if k < r and e + last * k <= anchor:
            return 1.0
    return worst


# ---------------------------------------------------------------- clusters


@dataclass
class ClusterChild:
    coefficient: Number
    real: bool
    multiplicity: int
    node: "ClusterNode"


@dataclass
class PuiseuxCluster:
    leading_exponent: Fraction
    multiplicity: int
    children: list[ClusterChild] = field(default_factory=list)


@dataclass
class ClusterNode:
    """Roots sharing a jet: those ending here exactly (nu1), unseparated ones, and clusters."""

    nu1: int
    unresolved: int
    clusters: list[PuiseuxCluster]

    @property
    def total(self) -> int:
        return self.nu1 + self.unresolved + sum(c.multiplicity for c in self.clusters)

    def to_json(self) -> dict:
        return {
            "nu1": self.nu1,
            "unresolved": self.unresolved,
            "clusters": [
                {
                    "leading_exponent": f"{c.leading_exponent.numerator}/{c.leading_exponent.denominator}",
                    "multiplicity": c.multiplicity,
                    "children": [
                        {
                            "coefficient": _coef_json(ch.coefficient),
                            "real": ch.real,
                            "multiplicity": ch.multiplicity,
                            "node": ch.node.to_json(),
                        }
                        for ch in c.children
                    ],
                }
                for c in self.clusters
            ],
        }

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [f"{pad}nu1={self.nu1} unresolved={self.unresolved}"]
        for c in self.clusters:
            lines.append(f"{pad}a={c.leading_exponent} N={c.multiplicity}")
            for ch in c.children:
                tag = "real" if ch.real else "complex"
                lines.append(f"{pad}  c={_fmt_number(ch.coefficient)} ({tag}) N={ch.multiplicity}")
                if ch.node.clusters or ch.node.unresolved:
                    lines.append(ch.node.render(indent + 2))
        return "\n".join(lines)


def _build(roots: list[RootExpansion], level: int) -> ClusterNode:
    nu1 = unresolved = 0
    by_exp: dict[Fraction, list[RootExpansion]] = {}
    for r in roots:
        if r.series.depth == level:
            if r.series.complete or level == 0:
                nu1 += r.multiplicity
            else:
                unresolved += r.multiplicity
            continue
        by_exp.setdefault(r.series.terms[level][0], []).append(r)
    clusters = []
    for a in sorted(by_exp):
        groups: list[tuple[Number, list[RootExpansion]]] = []
        for r in by_exp[a]:
            c = r.series.terms[level][1]
            for g in groups:
                if g[0] == c:
                    g[1].append(r)
                    break
                if _close(g[0], c):
                    raise PuiseuxError("two distinct coefficients closer than the separation tolerance")
            else:
                groups.append((c, [r]))
        children = []
        for c, members in sorted(groups, key=lambda g: (complex(g[0]).real, complex(g[0]).imag)):
            node = _build(members, level + 1)
            children.append(ClusterChild(c, is_real(c), node.total, node))
        clusters.append(PuiseuxCluster(a, sum(ch.multiplicity for ch in children), children))
    return ClusterNode(nu1, unresolved, clusters)


def cluster_tree(roots: list[RootExpansion]) -> ClusterNode:
    return _build(list(roots), 0)


def conjugate_closed(node: ClusterNode) -> bool:
    """Along real branches the coefficient set at each level is closed under conjugation."""
    for cl in node.clusters:
        coeffs = [complex(ch.coefficient) for ch in cl.children]
        for ch in cl.children:
            if not ch.real:
                z = complex(ch.coefficient).conjugate()
                if not any(abs(z - w) <= SEPARATION_TOL * abs(z) for w in coeffs):
                    return False
            elif not conjugate_closed(ch.node):
                return False
    return True


@dataclass(frozen=True)
class VertexData:
    vertices: list[tuple[Fraction, Fraction]]
    slopes: list[Fraction]
    multiplicities: list[int]


def vertex_data(tree: ClusterNode, nu2: Fraction = Fraction(0)) -> VertexData:
    """Vertices (B_l, A_l) rebuilt from leading exponents and cluster multiplicities."""
    cl = sorted(tree.clusters, key=lambda c: c.leading_exponent)
    trivial = tree.nu1 + tree.unresolved
    verts = []
    for l in range(len(cl) + 1):
        B = trivial + sum(c.multiplicity for c in cl[l:])
        A = nu2 + sum((c.leading_exponent * c.multiplicity for c in cl[:l]), Fraction(0))
        verts.append((Fraction(B), Fraction(A)))
    return VertexData(verts, [c.leading_exponent for c in cl], [c.multiplicity for c in cl])


# ---------------------------------------------------------------- edge factorization


@dataclass(frozen=True)
class EdgeFactorization:
    """c_l s^{A_{l-1}} z^{B_l} prod (z - c s^a)^N for the principal part along edge l."""

    edge: int
    slope: Fraction
    constant: Number
    z_power: int
    s_power: Fraction
    factors: list[EdgeRoot]
    max_rel_error: float


def principal_part_of_edge(psi, l: int) -> EdgeFactorization:
    poly = as_ppoly(psi)
    polygon = poly.polyhedron()
    edge = polygon.edge(l)
    coeffs = edge_polynomial(poly, edge)
    lead = coeffs[-1]
    roots = edge_roots(poly, edge)
    prod = np.array([complex(lead)], dtype=complex)
    for r in roots:
        for _ in range(r.multiplicity):
            prod = np.convolve(prod, np.array([-complex(r.value), 1.0]))
    want = np.array([complex(c) for c in coeffs])
    err = float(np.max(np.abs(prod - want)) / np.max(np.abs(want)))
    if err > 1e-8:
        raise PuiseuxError(f"edge {l} factorization mismatch: relative error {err:.2e}")
    return EdgeFactorization(
        l, edge.slope, lead, int(edge.left[0]), edge.right[1], roots, err
    )


def edge_factorizations(psi) -> list[EdgeFactorization]:
    poly = as_ppoly(psi)
    return [principal_part_of_edge(poly, l) for l in range(1, poly.polyhedron().num_edges + 1)]
