"""JSON report assembly.

Exact rationals are written as ``{"exact": "p/q"}`` and floating-point
results as ``{"fitted": x}`` so every number says where it came from.  The
report carries no timestamps: identical runs produce identical bytes.
"""

from __future__ import annotations

import json
import platform
from fractions import Fraction
from importlib import resources
from typing import Any

import numpy as np

from . import __version__
from .classify import ClassificationReport, Interval
from .exponents import SummabilityReport
from .geoverify.fits import FitResult
from .geoverify.kernels import BACKEND
from .legendre import LegendreData, ReducedPhase
from .pipeline import Analysis
from .poly.lattice import LatticePolynomial, format_polynomial
from .poly.series import TruncatedSeries
from .puiseux import ResolutionStep, TransitionCheck

SCHEMA = "singscope/1"
TOP_LEVEL = ("input", "classification", "legendre", "resolution", "summability", "verification", "meta")


def rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def exact(q) -> dict | None:
    return None if q is None else {"exact": rational(q)}


def fitted(x) -> dict:
    return {"fitted": float(x)}


def to_jsonable(value: Any) -> Any:
    """Recursive conversion of the library's values to JSON-ready data."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return exact(value)
    if isinstance(value, (float, np.floating)):
        return fitted(value)
    if isinstance(value, complex):
        return {"fitted": [value.real, value.imag]}
    if isinstance(value, Interval):
        return {"interval": [exact(value.lower), exact(value.upper)]}
    if isinstance(value, LatticePolynomial):
        return format_polynomial(value)
    if isinstance(value, TruncatedSeries):
        return series_json(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)


def series_json(s: TruncatedSeries) -> dict:
    return {"text": format_polynomial(s.poly), "valid_order": s.valid_order}


def input_block(text: str, phi: LatticePolynomial, order: int | None) -> dict:
    return {"expression": text, "canonical": format_polynomial(phi), "order": order}


def classification_block(rep: ClassificationReport) -> dict:
    nf = rep.normal_form
    return {
        "class": rep.class_tag,
        "n": rep.n,
        "m": rep.m,
        "h": exact(rep.h),
        "kappa_e": to_jsonable(rep.kappa_e),
        "kappa_e_adapted": to_jsonable(rep.kappa_e_adapted),
        "n_e_x": exact(rep.n_e_x),
        "n_e": exact(rep.n_e),
        "p_e": exact(rep.p_e),
        "p_c": to_jsonable(rep.p_c),
        "order": rep.order,
        "flags": to_jsonable(rep.flags),
        "normal_form": {
            "b1_0": exact(nf.b1_0),
            "beta0": exact(nf.beta0),
            "omega0": exact(nf.omega0),
            "psi": series_json(nf.psi),
        },
        "principal_part": None if rep.principal is None else format_polynomial(rep.principal),
        "notes": list(rep.notes),
    }


def legendre_block(leg: LegendreData, reduced: ReducedPhase, Phi: TruncatedSeries) -> dict:
    return {
        "route": leg.route,
        "B0": exact(leg.B0),
        "c": exact(leg.c),
        "b1_0": exact(leg.b1_0),
        "phi_breve": series_json(leg.phi_breve),
        "phi1": series_json(reduced.phi1),
        "Phi": series_json(Phi),
        "reduced_shear": None if reduced.shear is None else series_json(reduced.shear),
        "leading_shear_agrees": reduced.leading_shear_agrees,
        "checks": to_jsonable(leg.checks),
    }


def step_json(st: ResolutionStep) -> dict:
    return {
        "step": st.step_index,
        "path": list(st.path),
        "jet": st.jet.to_json(),
        "shift_slope": exact(st.shift_slope),
        "column_limit": st.column_limit,
        "polyhedron": st.polyhedron.to_json(),
        "vertex_data": [[exact(b), exact(a)] for b, a in st.vertex_data],
        "branches": [
            {
                "edge": br.edge,
                "slope": exact(br.slope),
                "coefficient": to_jsonable(br.coefficient),
                "real": br.real,
                "multiplicity": br.multiplicity,
                "case": br.case_tag,
                "action": br.action,
                "same_supporting_line": br.same_supporting_line,
                "child": br.child,
            }
            for br in st.branches
        ],
        "checks": to_jsonable(st.checks),
        "stopped": st.stopped,
        "stop_reason": st.stop_reason,
    }


def summability_block(summ: SummabilityReport) -> dict:
    probe = summ.predicted_pc + Fraction(1, 100)
    return {
        "predicted_pc": exact(summ.predicted_pc),
        "bisection_pc": exact(summ.bisection_pc),
        "class_p_c": to_jsonable(summ.class_p_c),
        "agrees": summ.agrees,
        "binding": list(summ.binding),
        "probe_p": exact(probe),
        "margins_at_probe": [
            {"domain": label, "sum": name, "value": exact(v)} for label, name, v in summ.margins_at(probe)
        ],
        "lemma_checks": [
            {"domain": label, "value": exact(v), "bound": exact(b)} for label, v, b in summ.lemma_checks
        ],
    }


def transition_json(tc: TransitionCheck) -> dict:
    return {
        "label": f"transition_E{tc.region}",
        "region": tc.region,
        "vertex": [exact(tc.vertex[0]), exact(tc.vertex[1])],
        "vertex_coefficient": to_jsonable(complex(tc.vertex_coefficient)),
        "ratio_range": [fitted(tc.ratio_min), fitted(tc.ratio_max)],
        "normalized_range": [fitted(tc.normalized_min), fitted(tc.normalized_max)],
        "samples": tc.samples,
        "M": tc.M,
        "verdict": tc.verdict,
    }


def verification_entry(item) -> dict:
    if isinstance(item, FitResult):
        return item.to_json()
    if isinstance(item, TransitionCheck):
        return transition_json(item)
    raise TypeError(f"cannot serialize verification item {type(item).__name__}")


def meta_block(params: dict) -> dict:
    return {
        "singscope": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "backend": BACKEND,
        "parameters": to_jsonable(params),
    }


def build_report(
    text: str,
    phi: LatticePolynomial,
    analysis: Analysis | None,
    verification: list,
    params: dict,
) -> dict:
    rep: dict = {"schema": SCHEMA}
    rep["input"] = input_block(text, phi, analysis.classification.order if analysis else params.get("order"))
    if analysis is not None:
        rep["classification"] = classification_block(analysis.classification)
        rep["legendre"] = legendre_block(analysis.legendre, analysis.reduced, analysis.Phi)
        rep["resolution"] = {
            "steps": [step_json(s) for s in analysis.resolution],
            "flags": to_jsonable(analysis.flags),
            "notes": list(analysis.notes),
        }
        rep["summability"] = summability_block(analysis.summability)
    else:
        for key in ("classification", "legendre", "resolution", "summability"):
            rep[key] = None
    rep["verification"] = [verification_entry(v) for v in verification]
    rep["meta"] = meta_block(params)
    return rep


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def load_schema() -> dict:
    text = resources.files("singscope").joinpath("report.schema.json").read_text()
    return json.loads(text)


def verdicts(report: dict) -> list[str]:
    return [v["verdict"] for v in report.get("verification") or []]
