"""Command-line front end.

    bimeans eval 4 1
    bimeans verify --suite thm1,thm2 --format json
    bimeans sharp
    bimeans tabulate f_lemma2 --grid-min 0.01 --grid-max 5 --grid-points 200

Exit status: 0 when everything checked holds, 1 on a mathematical failure
(a violated ordering, a constant off target, a bracket without a sign
change), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from bimeans import analysis
from bimeans.errors import (
    ConvergenceError,
    DomainError,
    GridDomainError,
    NoSignChangeError,
    UnknownSpecError,
)
from bimeans.inequalities import builtin_registry, composed_exprs, get_spec
from bimeans.means import MeanKind, PositivePair, Primitive, eval_expr
from bimeans.verification import REFINE_BELOW, Grid, verify

__all__ = ["RunConfig", "build_parser", "main"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

TABULATED = {
    "f_thm1": analysis.f_thm1,
    "f_lemma2": analysis.f_lemma2,
    "g": analysis.g_lemma2,
    "k": analysis.k_lemma2,
    "h": analysis.h_isag,
}

REPORT_COLUMNS = (
    "spec_name", "kind", "status", "min_margin", "argmin_x", "max_residual",
    "violations", "sign_changes", "refined_points",
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    grid_min: float = 1e-4
    grid_max: float = 30.0
    grid_points: int = 2001
    spacing: str = "log"
    tol_identity: float = 1e-12
    tol_margin: float = REFINE_BELOW
    output_format: str = "text"
    suite: tuple = ("all",)
    scale: float = 1.0
    witnesses: bool = True

    def __post_init__(self):
        for name in ("grid_min", "grid_max", "tol_identity", "tol_margin", "scale"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise UsageError(f"{name.replace('_', '-')} must be a finite positive number, got {v!r}")
        if not self.grid_min < self.grid_max:
            raise UsageError(f"grid-min {self.grid_min!r} must be below grid-max {self.grid_max!r}")
        if self.grid_points < 2:
            raise UsageError(f"grid-points must be at least 2, got {self.grid_points}")

    @property
    def grid(self) -> Grid:
        return Grid(self.grid_min, self.grid_max, self.grid_points, self.spacing)

    def selected(self) -> list:
        if self.suite == ("all",):
            return builtin_registry()
        try:
            return [get_spec(n) for n in self.suite]
        except UnknownSpecError as exc:
            raise UsageError(str(exc)) from None


def _fmt(v) -> str:
    """15 significant digits for people; None prints as empty."""
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.15g}"
    return str(v)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    # json writes floats with repr, the shortest string that round-trips
    return json.dumps(obj, indent=2) + "\n"


# -- eval ------------------------------------------------------------------

def _mean_table(a: float, b: float) -> list[tuple[str, float]]:
    p = PositivePair(a, b)
    rows = [(k.value, eval_expr(Primitive(k), p)) for k in MeanKind]
    rows += [(str(e), eval_expr(e, p)) for e in composed_exprs()]
    return rows


def cmd_eval(args) -> int:
    try:
        rows = _mean_table(args.a, args.b)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        sys.stdout.write(_json({"a": args.a, "b": args.b, "means": dict(rows)}))
    elif args.format == "csv":
        sys.stdout.write(_csv(rows, ("mean", "value")))
    else:
        width = max(len(n) for n, _ in rows)
        for name, v in rows:
            print(f"{name:<{width}}  {_fmt(v)}")
    return EXIT_OK


# -- verify ----------------------------------------------------------------

def _config(args, **extra) -> RunConfig:
    suite = tuple(s.strip() for s in args.suite.split(",") if s.strip()) if getattr(args, "suite", None) else ("all",)
    return RunConfig(
        grid_min=args.grid_min,
        grid_max=args.grid_max,
        grid_points=args.grid_points,
        spacing=args.spacing,
        output_format=getattr(args, "format", "text"),
        suite=suite or ("all",),
        **extra,
    )


def run_verify(cfg: RunConfig) -> list:
    specs = cfg.selected()
    try:
        return [
            verify(s, cfg.grid, scale=cfg.scale, witnesses=cfg.witnesses,
                   tol_identity=cfg.tol_identity, refine_below=cfg.tol_margin)
            for s in specs
        ]
    except GridDomainError as exc:
        raise UsageError(str(exc)) from None


def _report_row(r) -> list:
    return [
        r.spec_name, r.kind, r.status, _fmt(r.min_margin), _fmt(r.argmin_x),
        _fmt(r.max_residual), len(r.violations), len(r.sign_changes), r.refined_points,
    ]


def render_reports(reports, fmt: str) -> str:
    if fmt == "json":
        return _json([r.to_dict() for r in reports])
    if fmt == "csv":
        return _csv([_report_row(r) for r in reports], REPORT_COLUMNS)
    lines = []
    width = max(len(r.spec_name) for r in reports)
    for r in reports:
        line = f"{r.spec_name:<{width}}  {r.status.upper():4}"
        if r.min_margin is not None:
            line += f"  min_margin={_fmt(r.min_margin)} at x={_fmt(r.argmin_x)}"
        if r.max_residual is not None:
            line += f"  max_residual={_fmt(r.max_residual)}"
        for lo, hi in r.sign_changes:
            line += f"  sign change in ({_fmt(lo)}, {_fmt(hi)})"
        if r.violations:
            line += f"  violations={len(r.violations)} (first at x={_fmt(r.violations[0][0])})"
        lines.append(line)
    n_pass = sum(r.passed for r in reports)
    lines.append(f"{n_pass}/{len(reports)} passed")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    cfg = _config(
        args,
        tol_identity=args.tol_identity,
        tol_margin=args.tol_margin,
        scale=args.scale,
        witnesses=not args.no_witnesses,
    )
    reports = run_verify(cfg)
    sys.stdout.write(render_reports(reports, cfg.output_format))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# -- sharp -----------------------------------------------------------------

def sharp_rows() -> list[dict]:
    rows = []
    for s in analysis.sharp_constants():
        rows.append({
            "name": s.name, "x": s.x_star, "value": s.value, "target": s.target,
            "tolerance": s.tolerance, "expected": f"{s.target:.6g} +/- {s.tolerance:.3g}",
            "ok": s.ok, "note": s.note,
        })
    w = analysis.counterexample_1711()
    for name, x, v, positive in (("iqg_minus_i_at_1.5", 1.5, w.at_3_2, True),
                                 ("iqg_minus_i_at_2", 2.0, w.at_2, False)):
        rows.append({
            "name": name, "x": x, "value": v, "target": None, "tolerance": None,
            "expected": "> 0" if positive else "< 0",
            "ok": v > 0 if positive else v < 0,
            "note": "log(I(Q,G)/I); opposite signs show the two means are not comparable",
        })
    return rows


def cmd_sharp(args) -> int:
    try:
        rows = sharp_rows()
    except (NoSignChangeError, ConvergenceError) as exc:
        print(f"error: root search failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.format == "json":
        sys.stdout.write(_json(rows))
    elif args.format == "csv":
        cols = ("name", "x", "value", "expected", "ok", "note")
        sys.stdout.write(_csv([[_fmt(r[c]) for c in cols] for r in rows], cols))
    else:
        width = max(len(r["name"]) for r in rows)
        for r in rows:
            mark = "ok  " if r["ok"] else "FAIL"
            print(f"{r['name']:<{width}}  {mark}  {_fmt(r['value']):<18}  expected {r['expected']:<22}  x={_fmt(r['x'])}")
    return EXIT_OK if all(r["ok"] for r in rows) else EXIT_FAIL


# -- tabulate --------------------------------------------------------------

def cmd_tabulate(args) -> int:
    cfg = _config(args)
    fn = TABULATED[args.fn]
    rows = [(repr(x), repr(float(fn(x)))) for x in cfg.grid.points()]
    sys.stdout.write(_csv(rows, ("x", "value")))
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a finite positive number, got {text}")
    return v


def _count(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 2:
        raise argparse.ArgumentTypeError(f"need at least 2 points, got {n}")
    return n


def _grid_flags(p):
    p.add_argument("--grid-min", type=_positive, default=1e-4, help="smallest x (default 1e-4)")
    p.add_argument("--grid-max", type=_positive, default=30.0, help="largest x (default 30)")
    p.add_argument("--grid-points", type=_count, default=2001, help="number of points (default 2001)")
    p.add_argument("--spacing", choices=("log", "linear"), default="log")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bimeans",
        description="Check orderings between bivariate means and reproduce their sharp constants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="print every mean of a pair")
    p.add_argument("a", type=_positive)
    p.add_argument("b", type=_positive)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="sweep registry entries over a grid of x")
    p.add_argument("--suite", default="all", help="comma-separated entry names, or 'all'")
    _grid_flags(p)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--scale", type=_positive, default=1.0, help="common scale G of the pairs")
    p.add_argument("--tol-identity", type=_positive, default=1e-12)
    p.add_argument("--tol-margin", type=_positive, default=REFINE_BELOW,
                   help="relative size below which a float margin is recomputed in high precision")
    p.add_argument("--no-witnesses", action="store_true",
                   help="judge incomparable entries on the grid alone")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sharp", help="locate the sharp constants and crossing points")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_sharp)

    p = sub.add_parser("tabulate", help="x,value CSV of an auxiliary function")
    p.add_argument("fn", choices=sorted(TABULATED))
    _grid_flags(p)
    p.set_defaults(func=cmd_tabulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"{parser.prog}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
