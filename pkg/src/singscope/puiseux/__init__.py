"""Puiseux expansion of the roots of Phi, cluster trees and the resolution algorithm."""

from .ppoly import PuiseuxPoly, Validity, phase_second_derivative
from .resolve import (
    CASE1,
    FULL_COLLAPSE,
    NO_HIGH_MULT,
    SIMPLE_ROOTS,
    SUBCASE_I,
    SUBCASE_II,
    Branch,
    LemmaBranch,
    ResolutionStep,
    TransitionCheck,
    followed_multiplicities_nonincreasing,
    second_antiderivative_roundtrip,
    second_antiderivative_coefficients,
    multiplicity_lemma_classify,
    resolve,
    transition_factorization_check,
)
from .roots import (
    ClusterNode,
    EdgeFactorization,
    EdgeRoot,
    PuiseuxCluster,
    PuiseuxSeries,
    RootExpansion,
    VertexData,
    cluster_tree,
    conjugate_closed,
    edge_factorizations,
    edge_roots,
    principal_part_of_edge,
    puiseux_roots,
    root_residual,
    vertex_data,
)

__all__ = [name for name in dir() if not name.startswith("_")]
