"""Iterative resolution of Phi along its real root clusters, plus the per-step checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import PuiseuxError
from ..newton import NewtonPolyhedron
from ..poly import univariate as up
from ..poly.lattice import LatticePolynomial
from .ppoly import Number, PuiseuxPoly, _is_exact
from .roots import (
    PuiseuxSeries,
    RootExpansion,
    _expand,
    as_ppoly,
    certifies,
    cluster_tree,
    edge_roots,
    puiseux_roots,
    vertex_data,
)

CASE1 = "Case1_c_not_real_root"
SUBCASE_I = "Case2_subcase_i"
SUBCASE_II = "Case2_subcase_ii"

FULL_COLLAPSE = "full_collapse_form"
SIMPLE_ROOTS = "simple_real_roots_form"
NO_HIGH_MULT = "no_high_mult_real_root"
NOT_APPLICABLE = "not_applicable"


# ---------------------------------------------------------------- multiplicity lemma


@dataclass(frozen=True)
class LemmaBranch:
    tag: str
    n_e_minus_2: Fraction
    nu1: int
    p: int
    q: int
    factors: list[tuple[list[Fraction], int]]
    real_root_multiplicities: list[int]


def multiplicity_lemma_classify(P: LatticePolynomial, kappa) -> LemmaBranch:
    """Which alternative of the multiplicity lemma a homogeneous P falls into.

    P is written as y1^nu1 * y2^(..) * Q(y1^q / y2^p) with Q(0) != 0, and Q is
    split square-free over Q.  Real roots are counted for y2 > 0.
    """
    k1, k2 = Fraction(kappa[0]), Fraction(kappa[1])
    if not (k1 > 0 and 0 < k2 <= 1):
        raise PuiseuxError("multiplicity lemma needs kappa_1 > 0 and 0 < kappa_2 <= 1")
    if P.is_zero() or any(k1 * i + k2 * j != 1 for (i, j) in P.terms):
        raise PuiseuxError("P is not kappa-homogeneous of degree 1")
    pure = [(i, j) for (i, j) in P.terms if j == 0]
    if len(pure) != 1:
        raise PuiseuxError("P(y1, 0) must be a single power of y1")
    d = pure[0][0]
    slope = k1 / k2
    p, q = slope.numerator, slope.denominator
    nu1 = min(i for i, _ in P.terms)
    Q = [Fraction(0)] * ((d - nu1) // q + 1)
    for (i, _), c in P.terms.items():
        if (i - nu1) % q:
            raise PuiseuxError("P is not a polynomial in y1^q / y2^p")
        Q[(i - nu1) // q] = c
    ne2 = (1 - k2) / k1
    factors = up.squarefree_decomposition(Q)
    real_mults: list[int] = []
    for f, mult in factors:
        n_real = up.count_real_roots(f, 0, None) if q % 2 == 0 else up.count_real_roots(f)
        real_mults.extend([mult] * n_real)
    if nu1 == 0 and q == 1 and up.is_perfect_power_of_linear(Q)[0] and len(Q) - 1 == d:
        tag = FULL_COLLAPSE
    elif len(Q) == 2 and q >= 2:
        tag = SIMPLE_ROOTS
    else:
        if any(m > ne2 for m in real_mults):
            raise PuiseuxError("real root of multiplicity above n_e - 2 outside both lemma forms")
        tag = NO_HIGH_MULT
    return LemmaBranch(tag, ne2, nu1, p, q, factors, sorted(real_mults))


# ---------------------------------------------------------------- resolution


@dataclass
class Branch:
    edge: int
    slope: Fraction
    coefficient: Number
    real: bool
    multiplicity: int
    case_tag: str
    action: str
    shifted_polyhedron: NewtonPolyhedron
    same_supporting_line: bool | None = None
    child: int | None = None


@dataclass
class ResolutionStep:
    step_index: int
    path: tuple[int, ...]
    jet: PuiseuxSeries
    shift_slope: Fraction | None
    column_limit: int
    polyhedron: NewtonPolyhedron
    vertex_data: list[tuple[Fraction, Fraction]]
    branches: list[Branch] = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    stopped: bool = False
    stop_reason: str = ""

    def relevant_vertices(self) -> list[tuple[Fraction, Fraction]]:
        return [v for v in self.polyhedron.vertices if v[0] <= self.column_limit]


def _case2_tag(shifted: PuiseuxPoly, kappa) -> tuple[str, bool | None]:
    on_line = shifted.on_line(kappa)
    if len(on_line) >= 2:
        same = any(e.kappa == kappa for e in shifted.polyhedron().edges)
        return SUBCASE_I, same
    return SUBCASE_II, None


def _case1_point(roots) -> Fraction:
    return Fraction(math.ceil(1 + max(abs(complex(r.value)) for r in roots)))


def _lemma_at_step1(poly: PuiseuxPoly, polygon: NewtonPolyhedron) -> str:
    if not polygon.edges or polygon.vertices[0][1] != 0:
        return NOT_APPLICABLE
    kappa = polygon.edges[0].kappa
    if not 0 < kappa[1] <= 1:
        return NOT_APPLICABLE
    part = poly.principal_part(kappa)
    try:
        P = part.to_lattice(("y1", "y2"))
    except PuiseuxError:
        return NOT_APPLICABLE
    return multiplicity_lemma_classify(P, kappa).tag


class _Resolver:
    def __init__(self, max_steps: int, depth: int):
        self.max_steps = max_steps
        self.depth = depth
        self.steps: list[ResolutionStep] = []
        self.lemma_branch = NOT_APPLICABLE

    def _branches(self, step: ResolutionStep, poly: PuiseuxPoly, polygon: NewtonPolyhedron):
        """Enumerate real roots and one non-root point per edge in the cluster region."""
        pending = []
        for edge in polygon.edges:
            if not certifies(poly, edge, step.column_limit):
                step.checks.setdefault("uncertified_edges", []).append(edge.index)
                continue
            roots = edge_roots(poly, edge)
            a = edge.slope
            for r in roots:
                if not r.real:
                    continue
                value = r.value if _is_exact(r.value) else complex(r.value).real
                shifted = poly.shift(value, a)
                tag, same = _case2_tag(shifted, edge.kappa)
                action = "stop_simple_root" if r.multiplicity == 1 else "follow"
                b = Branch(edge.index, a, value, True, r.multiplicity, tag, action,
                           shifted.polyhedron(), same)
                step.branches.append(b)
                if r.multiplicity >= 2:
                    pending.append((b, shifted))
            c1 = _case1_point(roots)
            shifted = poly.shift(c1, a)
            step.branches.append(
                Branch(edge.index, a, c1, True, 0, CASE1, "transition_domain", shifted.polyhedron())
            )
        step.branches.sort(key=lambda b: (b.slope, complex(b.coefficient).real, b.case_tag))
        return pending

    def visit(self, poly: PuiseuxPoly, index: int, path, jet, column_limit, shift_slope):
        if index > self.max_steps:
            raise PuiseuxError(
                f"resolution exceeded {self.max_steps} steps along branch {list(path)}"
            )
        polygon = poly.polyhedron(column_limit)
        full = poly.polyhedron()
        step = ResolutionStep(
            index, tuple(path), jet, shift_slope, column_limit, full,
            [v for v in full.vertices if v[0] <= column_limit],
        )
        self.steps.append(step)
        if index == 1:
            tree = cluster_tree(puiseux_roots(poly, self.depth))
            step.checks["vertex_duality"] = list(polygon.vertices) == vertex_data(tree).vertices
            self.lemma_branch = _lemma_at_step1(poly, polygon)
            step.checks["multiplicity_lemma_branch"] = self.lemma_branch
        else:
            step.checks["multiplicity_lemma_branch"] = self.lemma_branch
            sub: list[RootExpansion] = []
            _expand(poly, column_limit, shift_slope, PuiseuxSeries(()), self.depth, sub)
            anchor = polygon.vertices[0][1]
            step.checks["vertex_duality"] = (
                list(polygon.vertices) == vertex_data(cluster_tree(sub), anchor).vertices
            )
        verts = full.vertices
        step.checks["A1_ge_1"] = None if len(verts) < 2 else verts[1][1] >= 1
        if step.checks["A1_ge_1"] is False:
            step.checks["A1_lt_1_admitted"] = self.lemma_branch == SIMPLE_ROOTS
        if index > 1:
            if not polygon.edges:
                step.stopped = True
                step.stop_reason = (
                    "single_real_root_exact" if poly.is_exact else "single_real_root_to_validity"
                )
                return
            if len(sub) == 1 and sub[0].series.is_real and sub[0].multiplicity == column_limit:
                step.stopped = True
                step.stop_reason = f"single_real_root_to_depth_{self.depth}"
                return
        pending = self._branches(step, poly, polygon)
        if not pending:
            step.stopped = True
            real = [b for b in step.branches if b.case_tag != CASE1]
            step.stop_reason = "all_real_roots_simple" if real else "no_real_roots"
            return
        for pos, (branch, shifted) in enumerate(pending):
            branch.child = len(self.steps)
            self.visit(
                shifted,
                index + 1,
                (*path, pos),
                jet.extend(branch.slope, branch.coefficient),
                branch.multiplicity,
                branch.slope,
            )


def resolve(Phi, max_steps: int = 20, depth: int = 6) -> list[ResolutionStep]:
    """Depth-first resolution tree over the real leading coefficients of Phi."""
    poly = as_ppoly(Phi)
    if poly.is_zero():
        raise PuiseuxError("Phi vanishes identically")
    if not poly.polyhedron().edges:
        return []
    r = _Resolver(max_steps, depth)
    r.visit(poly, 1, (), PuiseuxSeries(()), int(poly.polyhedron().vertices[0][0]), None)
    return r.steps


def followed_multiplicities_nonincreasing(steps: list[ResolutionStep]) -> bool:
    for st in steps:
        for b in st.branches:
            if b.child is not None and steps[b.child].column_limit > st.column_limit:
                return False
    return True


# ---------------------------------------------------------------- transition domains


@dataclass(frozen=True)
class TransitionCheck:
    region: int
    vertex: tuple[Fraction, Fraction]
    vertex_coefficient: complex
    ratio_min: float
    ratio_max: float
    normalized_min: float
    normalized_max: float
    samples: int
    M: int
    verdict: str


def _log_uniform(rng, lo: float, hi: float, size: int) -> np.ndarray:
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def transition_factorization_check(
    Phi, region: int, M: int = 8, samples: int = 2000, seed: int = 0, decades: float = 16.0
) -> TransitionCheck:
    """|Phi / (s^A z^B)| on sampled points of the transition domain E_region."""
    poly = as_ppoly(Phi)
    polygon = poly.polyhedron()
    L = polygon.num_edges
    if not 0 <= region <= L:
        raise PuiseuxError(f"transition domain E_{region} does not exist (L = {L})")
    B, A = polygon.vertices[region]
    slopes = [float(e.slope) for e in polygon.edges]
    lg2 = math.log(2.0)
    # log2 s upper limit so that the domain is non-empty
    if L == 0:
        s_top = -float(M)
    elif region == 0:
        s_top = -2.0 * M / slopes[0]
    elif region == L:
        s_top = -float(M)
    else:
        s_top = -2.0 * M / (slopes[region] - slopes[region - 1])
    s_top = min(s_top, -float(M)) - 1.0
    if s_top * lg2 < -650:
        raise PuiseuxError("empty sampled domain: s-range underflows for this M")
    rng = np.random.default_rng(seed)
    log_s = rng.uniform(s_top - decades, s_top, samples) * lg2
    if L == 0:
        lo, hi = log_s * 0 - (M + decades) * lg2, log_s * 0 - M * lg2
    elif region == 0:
        lo, hi = M * lg2 + slopes[0] * log_s, np.full(samples, -M * lg2)
    elif region == L:
        hi = -M * lg2 + slopes[-1] * log_s
        lo = hi - decades * lg2
    else:
        lo = M * lg2 + slopes[region] * log_s
        hi = -M * lg2 + slopes[region - 1] * log_s
    if np.any(hi <= lo):
        raise PuiseuxError("empty sampled domain for the chosen M")
    log_z = rng.uniform(lo, hi)
    sign = np.where(rng.uniform(size=samples) < 0.5, -1.0, 1.0)
    total = np.zeros(samples, dtype=complex)
    Bf, Af = float(B), float(A)
    for (k, e), c in poly.terms.items():
        mag = np.exp((k - Bf) * log_z + (float(e) - Af) * log_s)
        total = total + complex(c) * mag * sign**k
    ratio = np.abs(total)
    vc = complex(poly.coeff(int(B), A))
    norm = ratio / abs(vc)
    verdict = "PASS" if (norm.min() >= 0.25 and norm.max() <= 4.0) else "FAIL"
    return TransitionCheck(
        region, (B, A), vc, float(ratio.min()), float(ratio.max()),
        float(norm.min()), float(norm.max()), samples, M, verdict,
    )


# ---------------------------------------------------------------- second antiderivative


def second_antiderivative_coefficients(V: dict[int, Fraction], B) -> dict[int, Fraction]:
    """Coefficients of U with d^2/dz^2 (U z^{B+2}) = V z^B, V given as a Laurent dict."""
    B = Fraction(B)
    U = {}
    for k, rho in V.items():
        den = (B + k + 1) * (B + k + 2)
        if den == 0:
            raise PuiseuxError(f"exponent {k} hits a pole of the reconstruction")
        U[k] = Fraction(rho) / den
    return U


def second_antiderivative_roundtrip(V: dict[int, Fraction], B) -> bool:
    B = Fraction(B)
    U = second_antiderivative_coefficients(V, B)
    # d^2/dz^2 of U_k z^{B+2+k} = U_k (B+k+2)(B+k+1) z^{B+k}
    back = {k: u * (B + k + 2) * (B + k + 1) for k, u in U.items()}
    return all(back[k] == Fraction(V[k]) for k in V)
