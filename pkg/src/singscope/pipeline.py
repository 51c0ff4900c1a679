"""End-to-end analysis: classify, Legendre transform, resolution and summability."""

from __future__ import annotations

from dataclasses import dataclass, field

from .classify import A_E, ClassificationReport, PolyLike, classify
from .exponents import SummabilityReport, predicted_pc
from .legendre import LegendreData, ReducedPhase, legendre_x2, reduced_phase
from .poly.series import TruncatedSeries
from .puiseux import ResolutionStep, phase_second_derivative, resolve


@dataclass
class Analysis:
    classification: ClassificationReport
    legendre: LegendreData
    reduced: ReducedPhase
    Phi: TruncatedSeries
    resolution: list[ResolutionStep]
    summability: SummabilityReport
    flags: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def analyze(
    phi: PolyLike, order: int | None = None, depth: int = 6, max_steps: int = 20
) -> Analysis:
    rep = classify(phi, order)
    leg = legendre_x2(phi, rep.order, rep)
    red = reduced_phase(leg, rep)
    Phi = phase_second_derivative(red.phi1)
    steps = resolve(Phi, max_steps=max_steps, depth=depth)
    summ = predicted_pc(steps, rep)
    out = Analysis(rep, leg, red, Phi, steps, summ)
    if not steps and Phi.valid_order is not None:
        out.flags["vertical_edge_to_order"] = True
        out.notes.append(
            f"Phi has no compact edge through order {Phi.valid_order}; the E_0 budget assumes none beyond"
        )
    if rep.class_tag == A_E:
        out.notes.append("exceptional class: p_c is only bracketed, the prediction is reported alone")
    return out
