"""Scalar auxiliary functions behind the two-sided bounds, and their sharp constants.

Notation: every function takes the hyperbolic parameter ``x > 0`` of a pair
(``a/b = e^{2x}``). The two main functions are

* ``f_thm1(x) = x/tanh x - log(cosh x)/tanh(x)^2``, with
  ``log(I / sqrt(I(A^2, G^2))) = f_thm1(x) - 1/2``;
* ``f_lemma2(x) = 2x/tanh x - log((cosh(x)^2 + 1)/2)``, with
  ``log(2 I^2 / (A^2 + G^2)) = f_lemma2(x) - 2``.

Both have limits at 0 and infinity that are approached faster than binary64 can
track. ``*_parts`` therefore return ``(anchor, offset)`` where the offset from
the nearest limit is kept at full relative accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from bimeans import _special
from bimeans.errors import ConvergenceError, DomainError, NoSignChangeError

__all__ = [
    "RootBracket",
    "SharpConstant",
    "f_thm1",
    "f_thm1_parts",
    "f_thm1_deriv_identity",
    "f_lemma2",
    "f_lemma2_parts",
    "f_lemma2_derivative_fd",
    "k_lemma2",
    "g_lemma2",
    "h_isag",
    "d_iqg",
    "find_root",
    "extremum_lemma2",
    "sharp_constants",
    "crossing_I_vs_SAG",
    "counterexample_1711",
]

LN2 = _special.LN2
HALF = 0.5
THREE_LN2 = 3.0 * LN2

SMALL_X = 1e-3
LARGE_X = 1.0
FD_STEP = 1e-5
MAX_ITER = 200


def _check_nonneg(x):
    if not x >= 0:
        raise DomainError(f"x must be non-negative, got {x!r}")


# -- f_thm1 ---------------------------------------------------------------

def _thm1_series_offset(x):
    x2 = x * x
    return x2 * (1 / 12 + x2 * (-1 / 45 + x2 * (37 / 7560 - x2 * 19 / 18900)))


def _thm1_tail(x):
    """f_thm1(x) - log 2, exact algebra in q = e^{-2x}."""
    q = math.exp(-2.0 * x)
    num = -2.0 * x * q * (1.0 + q) + 4.0 * q * LN2 - math.log1p(q) * (1.0 + q) ** 2
    return num / (1.0 - q) ** 2


def f_thm1_parts(x: float) -> tuple[float, float]:
    """``(anchor, offset)`` with ``f_thm1(x) = anchor + offset``."""
    _check_nonneg(x)
    if x < SMALL_X:
        return HALF, _thm1_series_offset(x)
    if x >= LARGE_X:
        return LN2, _thm1_tail(x)
    t = math.tanh(x)
    return 0.0, x / t - _special.log_cosh(x) / (t * t)


def f_thm1(x: float) -> float:
    """x/tanh(x) - log(cosh x)/tanh(x)^2, extended by 1/2 at x = 0."""
    anchor, offset = f_thm1_parts(x)
    return anchor + offset


class DerivIdentity(NamedTuple):
    lhs: float
    rhs: float


def f_thm1_deriv_identity(x: float, h: float = FD_STEP) -> DerivIdentity:
    """Both sides of sinh(x)^3 f_thm1'(x) = 2 cosh x log cosh x - x sinh x.

    The left side uses a central difference of ``f_thm1``; the constant anchor
    is removed before differencing so the tiny large-x slope survives.
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x!r}")
    if x >= LARGE_X:
        diff = _thm1_tail(x + h) - _thm1_tail(x - h)
    else:
        diff = f_thm1(x + h) - f_thm1(x - h)
    s = math.sinh(x)
    lhs = s ** 3 * diff / (2.0 * h)
    rhs = 2.0 * math.cosh(x) * _special.log_cosh(x) - x * s
    return DerivIdentity(lhs, rhs)


# -- f_lemma2, g, k ---------------------------------------------------------

def _lemma2_series_offset(x):
    x2 = x * x
    return x2 * (1 / 6 + x2 * (-31 / 360 + x2 * (179 / 7560 - x2 * 923 / 302400)))


def _lemma2_tail(x):
    """f_lemma2(x) - 3 log 2, exact algebra in q = e^{-2x}."""
    q = math.exp(-2.0 * x)
    return 4.0 * x * q / (1.0 - q) - math.log1p(q * (6.0 + q))


def f_lemma2_parts(x: float) -> tuple[float, float]:
    _check_nonneg(x)
    if x < SMALL_X:
        return 2.0, _lemma2_series_offset(x)
    if x >= LARGE_X:
        return THREE_LN2, _lemma2_tail(x)
    s = math.sinh(x)
    return 0.0, 2.0 * x / math.tanh(x) - math.log1p(0.5 * s * s)


def f_lemma2(x: float) -> float:
    """2x/tanh(x) - log((cosh(x)^2 + 1)/2), extended by 2 at x = 0."""
    anchor, offset = f_lemma2_parts(x)
    return anchor + offset


def f_lemma2_derivative_fd(x: float, h: float = FD_STEP) -> float:
    if x >= LARGE_X:
        return (_lemma2_tail(x + h) - _lemma2_tail(x - h)) / (2.0 * h)
    return (f_lemma2(x + h) - f_lemma2(x - h)) / (2.0 * h)


def k_lemma2(x: float) -> float:
    """tanh(x) - 2x/3."""
    return math.tanh(x) - 2.0 * x / 3.0


def g_lemma2(x: float) -> float:
    """sinh(x)^2 (cosh(x)^2 + 1)/2 * f_lemma2'(x) = 2 sinh x cosh x - x cosh(x)^2 - x.

    Rewritten as ``(sinh 2x - 2x) - x sinh(x)^2`` so the x^3/3 leading term
    is not the difference of two O(x) quantities. Returns -inf once the
    hyperbolic terms overflow (the sign is settled long before).
    """
    try:
        s = math.sinh(x)
        return _special.sinh_minus_id(2.0 * x) - x * s * s
    except OverflowError:
        return -math.inf


def g_scale(x: float) -> float:
    """Magnitude of the individual terms of ``g_lemma2``; sets its rounding floor."""
    return abs(math.sinh(2.0 * x)) + abs(x) * (math.cosh(x) ** 2 + 1.0)


# -- crossing functions ----------------------------------------------------

def h_isag(x: float) -> float:
    """log(I/G) - log(S(A,G)/G) = (x/tanh x - 1) - cosh x log(cosh x)/(1 + cosh x).

    Positive where I > S(A, G).
    """
    c = math.cosh(x)
    return _special.xcoth_m1(x) - c * _special.log_cosh(x) / (1.0 + c)


def d_iqg(x: float) -> float:
    """y log y/(y - 1) - x/tanh x with y = sqrt(cosh 2x); equals log(I(Q,G)/I)."""
    log_y = 0.5 * _special.log_cosh(2.0 * x)
    ym1 = math.expm1(log_y)
    return (ym1 + 1.0) * log_y / ym1 - 1.0 - _special.xcoth_m1(x)


# -- root finding ----------------------------------------------------------

@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")
        if not self.f_lo * self.f_hi < 0:
            raise NoSignChangeError(
                f"no sign change on [{self.lo}, {self.hi}]: f = {self.f_lo}, {self.f_hi}"
            )

    @classmethod
    def around(cls, fn: Callable[[float], float], lo: float, hi: float) -> RootBracket:
        return cls(lo, hi, fn(lo), fn(hi))


def find_root(
    fn: Callable[[float], float], bracket: RootBracket, tol: float = 1e-12
) -> float:
    """Zero of ``fn`` inside ``bracket``: secant steps interleaved with bisection.

    Every other step is a plain bisection, so the bracket width at least halves
    every two iterations whatever the secant does.
    """
    lo, hi, f_lo, f_hi = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    if not f_lo * f_hi < 0:
        raise NoSignChangeError("bracket does not straddle a sign change")
    for it in range(MAX_ITER):
        width = hi - lo
        mid = lo + 0.5 * width
        if width <= tol or not lo < mid < hi:
            return mid
        trial = mid
        if it % 2 == 0:
            s = hi - f_hi * (hi - lo) / (f_hi - f_lo)
            # keep the secant point strictly inside
            if lo < s < hi:
                trial = min(max(s, lo + 0.01 * width), hi - 0.01 * width)
        f_t = fn(trial)
        if f_t == 0.0:
            return trial
        if (f_t < 0) == (f_lo < 0):
            lo, f_lo = trial, f_t
        else:
            hi, f_hi = trial, f_t
    raise ConvergenceError(f"no convergence in {MAX_ITER} iterations, bracket [{lo}, {hi}]")


def extremum_lemma2(tol: float = 1e-12) -> float:
    """x1: the zero of g_lemma2 in (3/2, 2), i.e. the maximiser of f_lemma2."""
    return find_root(g_lemma2, RootBracket.around(g_lemma2, 1.5, 2.0), tol)


@dataclass(frozen=True)
class SharpConstant:
    """A computed constant and the published value it should reproduce."""

    name: str
    x_star: float
    value: float
    target: float
    tolerance: float
    note: str = ""

    @property
    def ok(self) -> bool:
        return abs(self.value - self.target) <= self.tolerance


def sharp_constants() -> list[SharpConstant]:
    x0 = find_root(k_lemma2, RootBracket.around(k_lemma2, 1.0, 1.5))
    x1 = extremum_lemma2()
    f1 = f_lemma2(x1)
    c = math.exp(f1 - 2.0)
    x_cross = crossing_I_vs_SAG()
    return [
        SharpConstant("x0", x0, x0, 1.25, 0.25, "zero of k, inside (1, 3/2)"),
        SharpConstant("x1", x1, x1, 1.606, 1e-3, "zero of g, maximiser of f_lemma2"),
        SharpConstant("f_lemma2_max", x1, f1, 2.1312, 1e-3, "f_lemma2(x1)"),
        SharpConstant("c", x1, c, 1.14, 5e-3, "sup of 2 I^2/(A^2+G^2) = exp(f_lemma2(x1) - 2)"),
        SharpConstant("f_thm1_at_0", 1e-6, f_thm1(1e-6), 0.5, 1e-6, "lower limit of f_thm1"),
        SharpConstant("f_thm1_at_inf", 50.0, f_thm1(50.0), LN2, 1e-6, "upper limit of f_thm1"),
        SharpConstant(
            "thm1_upper_bound", 50.0, math.exp(f_thm1(50.0) - 0.5), 2.0 / math.sqrt(math.e),
            1e-6, "sup of I/sqrt(I(A^2,G^2)) = exp(log 2 - 1/2)",
        ),
        SharpConstant("f_lemma2_at_0", 1e-6, f_lemma2(1e-6), 2.0, 1e-5, "lower limit of f_lemma2"),
        SharpConstant("f_lemma2_at_inf", 50.0, f_lemma2(50.0), THREE_LN2, 1e-6, "limit of f_lemma2 at infinity"),
        SharpConstant(
            "crossing_I_SAG", x_cross, x_cross, 0.5 * (2.2 + 2.284), 0.5 * (2.284 - 2.2),
            "zero of h: I = S(A,G); must lie in (2.2, 2.284]",
        ),
    ]


def crossing_I_vs_SAG(tol: float = 1e-12) -> float:
    """Parameter where I and S(A, G) swap order (h > 0 to the left, h < 0 to the right)."""
    return find_root(h_isag, RootBracket.around(h_isag, 2.0, 2.4), tol)


class Witness1711(NamedTuple):
    at_3_2: float
    at_2: float


def counterexample_1711() -> Witness1711:
    """d_iqg at x = 3/2 (positive: I(Q,G) > I) and at x = 2 (negative)."""
    return Witness1711(d_iqg(1.5), d_iqg(2.0))
