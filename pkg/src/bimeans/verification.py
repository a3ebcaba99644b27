"""Grid sweeps over the hyperbolic parameter with margin and violation reporting."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from mpmath import mp

from bimeans import analysis, highprec
from bimeans.errors import GridDomainError, UnknownSpecError
from bimeans.inequalities import InequalitySpec, Kind, get_spec
from bimeans.means import half_log_ratio
from bimeans.param import Param, from_param

__all__ = [
    "Grid",
    "DEFAULT_GRID",
    "VerificationReport",
    "verify",
    "verify_all",
    "link_margin",
    "sharpness_probe",
]

# A binary64 margin is trusted only when it clears this multiple of the size
# of the log-quantities it was computed from; otherwise it is recomputed in
# high precision.
REFINE_BELOW = 1e-10


@dataclass(frozen=True)
class Grid:
    x_min: float = 1e-4
    x_max: float = 30.0
    count: int = 2001
    spacing: str = "log"

    def __post_init__(self):
        if not (self.x_min > 0 and math.isfinite(self.x_max)):
            raise GridDomainError("grid must lie in 0 < x < inf")
        if not self.x_min < self.x_max:
            raise ValueError(f"grid_min {self.x_min} must be below grid_max {self.x_max}")
        if self.count < 2:
            raise ValueError("grid needs at least 2 points")
        if self.spacing not in ("log", "linear"):
            raise ValueError(f"spacing must be 'log' or 'linear', not {self.spacing!r}")

    def points(self) -> list[float]:
        if self.spacing == "log":
            xs = np.geomspace(self.x_min, self.x_max, self.count)
        else:
            xs = np.linspace(self.x_min, self.x_max, self.count)
        return [float(x) for x in xs]

    def describe(self) -> dict:
        return {"min": self.x_min, "max": self.x_max, "count": self.count, "spacing": self.spacing}


DEFAULT_GRID = Grid()


@dataclass
class VerificationReport:
    spec_name: str
    kind: str
    grid: dict
    min_margin: Optional[float]
    argmin_x: Optional[float]
    max_residual: Optional[float]
    violations: list = field(default_factory=list)
    sign_changes: list = field(default_factory=list)
    refined_points: int = 0
    status: str = "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        d = dict(d)
        d["violations"] = [tuple(v) for v in d.get("violations", [])]
        d["sign_changes"] = [tuple(v) for v in d.get("sign_changes", [])]
        return cls(**d)


class _Point:
    """Both evaluation routes for one grid point, the high-precision one lazily."""

    def __init__(self, spec: InequalitySpec, x: float, scale: float):
        self.spec = spec
        self.x = x
        self.scale = scale
        self.pair = from_param(Param(x, scale))
        xh = half_log_ratio(self.pair)
        self.splits = [t.split(xh) for t in spec.terms]
        self._mp = None

    def mp_values(self):
        if self._mp is None:
            with mp.workdps(highprec.digits_for(self.x)):
                a, b = mp.mpf(self.pair.a), mp.mpf(self.pair.b)
                # keep the values as mpf; margins are formed at the same precision
                self._mp = (mp.dps, [t.mp(a, b) for t in self.spec.terms])
        return self._mp

    def value(self, i: int) -> float:
        k, r = self.splits[i]
        deg = self.spec.terms[i].degree
        return k * math.exp(deg * math.log(self.scale) + r)


def _float_margin(left, right):
    """(left - right)/right from two (K, r) splits, and the size of its rounding floor."""
    (kl, rl), (kr, rr) = left, right
    logk = 0.0 if kl == kr else math.log(kl / kr)
    d = logk + rl - rr
    floor = abs(logk) + abs(rl) + abs(rr)
    return math.expm1(d), floor


def link_margin(pt: _Point, i: int, j: int, refine_below: float = REFINE_BELOW):
    """Signed relative gap (t_i - t_j)/t_j at one point; returns (value, refined)."""
    m, floor = _float_margin(pt.splits[i], pt.splits[j])
    if math.isfinite(m) and abs(m) > refine_below * max(floor, 1e-300):
        return m, False
    dps, vals = pt.mp_values()
    with mp.workdps(dps):
        exact = (vals[i] - vals[j]) / vals[j]
        # below the working precision the sign is not certified
        if abs(exact) < mp.mpf(10) ** (-(dps - 10)):
            return 0.0, True
        return float(exact), True


def _chain_report(spec, xs, scale, tol_identity, refine_below, grid_desc):
    min_margin, argmin = math.inf, None
    max_res = None
    violations = []
    refined = 0
    for x in xs:
        pt = _Point(spec, x, scale)
        touched = False
        for i, rel in enumerate(spec.relations):
            if rel == "=":
                res, _ = _float_margin(pt.splits[i], pt.splits[i + 1])
                res = abs(res)
                if not math.isfinite(res):
                    res = math.inf
                max_res = res if max_res is None else max(max_res, res)
                if res > tol_identity:
                    violations.append((x, pt.value(i), pt.value(i + 1)))
                continue
            big, small = (i, i + 1) if rel == ">" else (i + 1, i)
            mval, was_refined = link_margin(pt, big, small, refine_below)
            touched |= was_refined
            if mval < min_margin:
                min_margin, argmin = mval, x
            if not mval > 0:
                violations.append((x, pt.value(i), pt.value(i + 1)))
        refined += touched
    has_strict = any(r != "=" for r in spec.relations)
    return VerificationReport(
        spec_name=spec.name,
        kind=spec.kind.value,
        grid=grid_desc,
        min_margin=min_margin if has_strict else None,
        argmin_x=argmin if has_strict else None,
        max_residual=max_res,
        violations=sorted(violations),
        refined_points=refined,
        status="pass" if not violations else "fail",
    )


def _incomparable_report(spec, xs, scale, witnesses, refine_below, grid_desc):
    signs = set()
    margins = []
    refined = 0
    for x in xs:
        pt = _Point(spec, x, scale)
        mval, was_refined = link_margin(pt, 0, 1, refine_below)
        refined += was_refined
        margins.append((x, mval))
        if mval != 0:
            signs.add(mval > 0)
    sign_changes = [
        (x0, x1)
        for (x0, m0), (x1, m1) in zip(margins, margins[1:])
        if m0 != 0 and m1 != 0 and (m0 > 0) != (m1 > 0)
    ]
    violations = []
    if witnesses:
        for x, rel in spec.witnesses:
            pt = _Point(spec, x, scale)
            mval, _ = link_margin(pt, 0, 1, refine_below)
            ok = mval > 0 if rel == ">" else mval < 0
            if ok:
                signs.add(rel == ">")
            else:
                violations.append((x, pt.value(0), pt.value(1)))
    min_x, min_m = min(margins, key=lambda t: t[1])
    status = "pass" if signs == {True, False} and not violations else "fail"
    return VerificationReport(
        spec_name=spec.name,
        kind=spec.kind.value,
        grid=grid_desc,
        min_margin=min_m,
        argmin_x=min_x,
        max_residual=None,
        violations=sorted(violations),
        sign_changes=sign_changes,
        refined_points=refined,
        status=status,
    )


def verify(
    spec: InequalitySpec,
    grid: Grid = DEFAULT_GRID,
    *,
    scale: float = 1.0,
    witnesses: bool = True,
    tol_identity: float = 1e-12,
    refine_below: float = REFINE_BELOW,
) -> VerificationReport:
    """Sweep ``spec`` over ``grid`` (pairs ``scale * (e^x, e^-x)``).

    Chain links report the relative gap (larger - smaller)/smaller; identities
    the largest relative residual; incomparable entries pass when both
    orderings occur and every registered witness shows its stated ordering.
    """
    xs = grid.points()
    lo, hi = spec.domain
    if xs[0] <= lo or xs[-1] >= hi:
        raise GridDomainError(
            f"grid [{xs[0]}, {xs[-1]}] leaves the domain ({lo}, {hi}) of {spec.name}"
        )
    desc = grid.describe()
    if spec.kind is Kind.INCOMPARABLE:
        return _incomparable_report(spec, xs, scale, witnesses, refine_below, desc)
    return _chain_report(spec, xs, scale, tol_identity, refine_below, desc)


def verify_all(specs, grid: Grid = DEFAULT_GRID, **kwargs) -> list[VerificationReport]:
    return [verify(s, grid, **kwargs) for s in specs]


class SharpnessGaps(NamedTuple):
    low_end_gap: float
    high_end_gap: float


def sharpness_probe(spec_name: str) -> SharpnessGaps:
    """Distance of the middle quantity of thm1/thm2 to its optimal constants.

    thm1 is probed at x = 1e-6 and x = 50 against 1 and 2/sqrt(e); thm2 at
    x = 1e-6 against 1 and at its maximiser x1 against c.
    """
    if spec_name not in ("thm1", "thm2"):
        raise UnknownSpecError(f"no sharpness probe for {spec_name!r}")
    spec = get_spec(spec_name)
    low, middle, high = spec.terms
    low_c = low.split(0.0)[0]
    high_c = high.split(0.0)[0]
    x_high = 50.0 if spec_name == "thm1" else analysis.extremum_lemma2()
    return SharpnessGaps(
        abs(middle.value(1e-6) - low_c),
        abs(middle.value(x_high) - high_c),
    )
