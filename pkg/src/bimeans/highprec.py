"""Arbitrary-precision evaluation straight from the defining formulas.

This is the independent second route: it never touches the hyperbolic
kernels in :mod:`bimeans.means`, only ``(a-b)/(log a - log b)`` and friends,
evaluated with enough digits that the cancellation is harmless. The verifier
falls back to it for margins too small for binary64 to certify.
"""

from __future__ import annotations

import functools
import math

import mpmath
from mpmath import mp

from bimeans.means import Arg, Composed, MeanExpr, MeanKind, Primitive

__all__ = ["mp_mean", "mp_eval_expr", "digits_for", "sharp_c"]


def mp_mean(kind: MeanKind, a, b):
    a = mp.mpf(a)
    b = mp.mpf(b)
    if kind is MeanKind.ARITHMETIC:
        return (a + b) / 2
    if kind is MeanKind.GEOMETRIC:
        return mp.sqrt(a * b)
    if kind is MeanKind.ROOT_SQUARE:
        return mp.sqrt((a * a + b * b) / 2)
    if kind is MeanKind.WEIGHTED_S:
        return mp.exp((a * mp.log(a) + b * mp.log(b)) / (a + b))
    if a == b:
        return a
    if kind is MeanKind.LOGARITHMIC:
        return (a - b) / (mp.log(a) - mp.log(b))
    if kind is MeanKind.IDENTRIC:
        return mp.exp((a * mp.log(a) - b * mp.log(b)) / (a - b) - 1)
    raise TypeError(f"not a MeanKind: {kind!r}")


def mp_eval_expr(e: MeanExpr, a, b):
    if isinstance(e, Primitive):
        return mp_mean(e.kind, a, b)
    if isinstance(e, Arg):
        return mp.mpf(a if e.index == 0 else b)
    if isinstance(e, Composed):
        u = mp_eval_expr(e.left, a, b) ** e.power
        v = mp_eval_expr(e.right, a, b) ** e.power
        return mp_mean(e.outer, u, v)
    raise TypeError(f"not a MeanExpr: {e!r}")


def digits_for(x: float) -> int:
    """Working precision (decimal digits) adequate for margins at parameter x.

    Chain margins shrink like x**8 as x -> 0 and like exp(-2x) as x grows; the
    definitional formulas also cancel about log10(1/x) digits per nesting level.
    """
    small = max(0.0, -math.log10(x)) if x > 0 else 0.0
    return 40 + math.ceil(12.0 * small) + math.ceil(max(x, 0.0))


@functools.lru_cache(maxsize=None)
def _sharp_c(dps: int):
    with mp.workdps(dps + 10):
        g = lambda t: 2 * mp.sinh(t) * mp.cosh(t) - t * mp.cosh(t) ** 2 - t
        x1 = mpmath.findroot(g, (mp.mpf("1.5"), mp.mpf(2)), solver="anderson")
        f = 2 * x1 / mp.tanh(x1) - mp.log((mp.cosh(x1) ** 2 + 1) / 2)
        return mp.exp(f - 2)


def sharp_c():
    """max over x > 0 of 2 I^2/(A^2 + G^2), at the current mpmath precision."""
    return +_sharp_c(mp.dps)
