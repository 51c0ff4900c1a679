"""Command-line front end: ``singscope analyze`` and ``singscope verify``.

Exit codes: 0 all requested checks pass, 1 a check failed, 2 usage error,
3 a fit was inconclusive, 4 a module raised an error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import report as rpt
from .classify import A_MINUS, classify
from .errors import SingscopeError
from .geoverify import (
    box_family_exponent,
    corput_decay,
    oscillatory_J,
    sublevel_exponent,
)
from .geoverify.fits import FAIL, INCONCLUSIVE, PASS
from .geoverify.measure import DELTA_MAX, DELTA_MIN
from .geoverify.oscillatory import LAMBDA_MAX, LAMBDA_MIN
from .pipeline import analyze
from .poly import parse_poly
from .puiseux import transition_factorization_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_MODULE = 0, 1, 2, 3, 4
DIRECT_ALIASES = {"x": "x1", "s2": "x2", "s": "x2"}
CHECKS = ("sublevel", "boxes", "corput", "oscillatory", "transition")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _pair(text: str) -> tuple[int, int]:
    try:
        j, k = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected j,k (two integers), got {text!r}") from None
    return j, k


def _read_expr(arg: str) -> str:
    """``@path`` reads the expression from a file."""
    if arg.startswith("@"):
        return Path(arg[1:]).read_text().strip()
    return arg


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("expr", help="polynomial in x1, x2 (or @FILE)")
    p.add_argument("--order", type=int, default=None, help="series truncation order (default 4n)")
    p.add_argument("--depth", type=int, default=6, help="Puiseux expansion depth")
    p.add_argument("--max-steps", type=int, default=20, help="cap on resolution steps")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=2048, help="columns of the measure quadrature")
    p.add_argument("--json", metavar="PATH", default=None, help="write the report here instead of stdout")
    p.add_argument("--tolerance", type=float, default=None, help="override the check's default tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="singscope", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="classify, transform, resolve and predict p_c")
    _common(a)
    a.add_argument("--verify", action="store_true", help="also run the sublevel, box and transition checks")

    v = sub.add_parser("verify", help="run one numeric check")
    _common(v)
    v.add_argument("which", choices=CHECKS)
    v.add_argument("--k", type=int, choices=(0, 1, 2), default=1, help="box family")
    v.add_argument("--p", type=_fraction, default=None, help="Lebesgue exponent for the box family")
    v.add_argument("--m", type=int, default=2, help="derivative order for corput")
    v.add_argument("--delta-min", type=float, default=DELTA_MIN)
    v.add_argument("--delta-max", type=float, default=DELTA_MAX)
    v.add_argument("--lambda-min", type=float, default=None)
    v.add_argument("--lambda-max", type=float, default=None)
    v.add_argument("--region", type=_pair, default=(4, 18), help="j,k window for oscillatory")
    v.add_argument("--nonstationary", action="store_true", help="oscillatory: move the critical point out")
    v.add_argument("--direct", action="store_true",
                   help="oscillatory: EXPR already is phi1(x1, s2), written with s2 or x2")
    v.add_argument("--M", type=int, default=8, help="transition-domain margin exponent")
    v.add_argument("--samples", type=int, default=2000)
    return parser


def _tol(args, default: float) -> float:
    return default if args.tolerance is None else args.tolerance


def _transition_checks(analysis, args) -> list:
    if not analysis.resolution:
        return []
    L = analysis.resolution[0].polyhedron.num_edges
    return [transition_factorization_check(analysis.Phi, l, getattr(args, "M", 8),
                                           getattr(args, "samples", 2000), args.seed) for l in range(L + 1)]


def _default_p(k: int, rep) -> Fraction:
    if k == 0:
        return Fraction(3, 2)
    if k == 2:
        return rep.h
    if rep.p_e is None:
        raise SingscopeError("the k = 1 family needs an A_plus input")
    return rep.p_e


def _run_verify(args, phi) -> tuple[list, object]:
    which = args.which
    analysis = None
    if which == "sublevel":
        return [sublevel_exponent(phi, (args.delta_min, args.delta_max), args.grid, _tol(args, 0.05))], None
    if which == "boxes":
        rep = classify(phi, args.order)
        p = args.p if args.p is not None else _default_p(args.k, rep)
        fit = box_family_exponent(phi, args.k, p, (args.delta_min, args.delta_max), args.grid,
                                  _tol(args, 0.1), report=rep)
        return [fit], None
    if which == "corput":
        lo = args.lambda_min or LAMBDA_MIN
        hi = args.lambda_max or LAMBDA_MAX
        return [corput_decay(phi, args.m, (lo, hi), _tol(args, 0.05))], None
    if which == "oscillatory":
        if args.direct:
            phi1 = phi
        else:
            analysis = analyze(phi, args.order, args.depth, args.max_steps)
            phi1 = analysis.reduced.phi1
        kw = {}
        if args.lambda_min or args.lambda_max:
            rng = (args.lambda_min or 4.0, args.lambda_max or 2.0**12)
            kw = {"lambda_d_range": rng} if not args.nonstationary else {"nonstationary_range": rng}
        return [oscillatory_J(phi1, args.region, stationary=not args.nonstationary,
                              tol=args.tolerance, **kw)], analysis
    analysis = analyze(phi, args.order, args.depth, args.max_steps)
    checks = _transition_checks(analysis, args)
    if not checks:
        raise SingscopeError("Phi has no compact edge: there is no transition domain to sample")
    return checks, analysis


def _run_analyze_checks(args, phi, analysis) -> list:
    rep = analysis.classification
    out = [sublevel_exponent(phi, grid=args.grid)]
    for k in (0, 2) if rep.class_tag == A_MINUS else (0, 1, 2):
        out.append(box_family_exponent(phi, k, _default_p(k, rep), grid=args.grid, report=rep))
    out.extend(_transition_checks(analysis, args))
    return out


def _exit_code(report: dict) -> int:
    verdicts = rpt.verdicts(report)
    if FAIL in verdicts:
        return EXIT_FAIL
    if INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    assert all(v == PASS for v in verdicts)
    return EXIT_OK


def _params(args) -> dict:
    keep = {k: v for k, v in vars(args).items() if k not in ("json", "expr")}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(keep.items())}


def _emit(report: dict, path: str | None) -> None:
    text = rpt.dumps(report)
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text)
    summ = report.get("summability")
    cls = report.get("classification")
    if cls:
        pc = summ["predicted_pc"]["exact"] if summ else "?"
        print(f"{report['input']['canonical']}: class {cls['class']}, predicted p_c = {pc}")
    for v in report["verification"]:
        print(f"{v['label']}: {v['verdict']}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _read_expr(args.expr)
        phi = parse_poly(text, aliases=DIRECT_ALIASES) if getattr(args, "direct", False) else parse_poly(text)
        if args.command == "analyze":
            analysis = analyze(phi, args.order, args.depth, args.max_steps)
            checks = _run_analyze_checks(args, phi, analysis) if args.verify else []
        else:
            checks, analysis = _run_verify(args, phi)
        report = rpt.build_report(text, phi, analysis, checks, _params(args))
    except SingscopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODULE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args.json)
    return _exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
