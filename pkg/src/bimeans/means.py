"""The six primitive two-argument means and their compositions.

All L, I and S evaluations go through the half log-ratio ``x = log(a/b)/2``
and the geometric mean ``G``:

    A/G = cosh x          L/G = sinh(x)/x        I/G = exp(x coth x - 1)
    Q/G = sqrt(cosh 2x)   S/G = exp(x tanh x)

so nothing of the form ``a**a`` or ``(a-b)/(log a - log b)`` is ever formed.
"""

from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass
from typing import Union

from bimeans import _special
from bimeans.errors import DomainError

__all__ = [
    "PositivePair",
    "MeanKind",
    "Primitive",
    "Arg",
    "Composed",
    "MeanExpr",
    "mean",
    "eval_expr",
    "log_mean_ratio",
    "log_ratio",
    "half_log_ratio",
    "log_rel_expr",
    "expr_degree",
]


@dataclass(frozen=True)
class PositivePair:
    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if not isinstance(v, numbers.Real) or not v > 0 or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite positive real, got {v!r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    def swapped(self) -> PositivePair:
        return PositivePair(self.b, self.a)

    def scaled(self, t: float) -> PositivePair:
        return PositivePair(t * self.a, t * self.b)


class MeanKind(enum.Enum):
    ARITHMETIC = "A"
    GEOMETRIC = "G"
    LOGARITHMIC = "L"
    IDENTRIC = "I"
    WEIGHTED_S = "S"
    ROOT_SQUARE = "Q"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Primitive:
    kind: MeanKind

    def __str__(self):
        return str(self.kind)


@dataclass(frozen=True)
class Arg:
    """Projection onto the first (index 0) or second (index 1) argument."""

    index: int

    def __post_init__(self):
        if self.index not in (0, 1):
            raise ValueError("Arg index must be 0 or 1")

    def __str__(self):
        return "ab"[self.index]


@dataclass(frozen=True)
class Composed:
    """``outer(left**power, right**power)``."""

    outer: MeanKind
    left: "MeanExpr"
    right: "MeanExpr"
    power: int = 1

    def __post_init__(self):
        if self.power not in (1, 2):
            raise ValueError("power must be 1 or 2")
        if expr_degree(self.left) != expr_degree(self.right):
            raise ValueError("composed arguments must have equal homogeneity degree")

    def __str__(self):
        sup = "^2" if self.power == 2 else ""
        return f"{self.outer}({self.left}{sup},{self.right}{sup})"


MeanExpr = Union[Primitive, Arg, Composed]


def expr_degree(e: MeanExpr) -> int:
    """Homogeneity degree: ``e(ta, tb) = t**deg * e(a, b)``."""
    if isinstance(e, Composed):
        return e.power * expr_degree(e.left)
    return 1


def half_log_ratio(p: PositivePair) -> float:
    """Signed ``log(a/b)/2``, accurate also when a and b are close."""
    hi, lo = max(p.a, p.b), min(p.a, p.b)
    r = hi / lo
    if r < 2.0:
        x = 0.5 * math.log1p((hi - lo) / lo)
    elif math.isfinite(r):
        x = 0.5 * math.log(r)
    else:
        x = 0.5 * (math.log(hi) - math.log(lo))
    return x if p.a >= p.b else -x


def _geometric(hi: float, lo: float) -> float:
    prod = hi * lo
    if 1e-300 < prod < 1e300:
        return math.sqrt(prod)
    return math.sqrt(hi) * math.sqrt(lo)


def log_ratio(kind: MeanKind, x: float) -> float:
    """log(M/G) for the pair (e^x, e^-x); even in x."""
    if kind is MeanKind.GEOMETRIC:
        return 0.0
    if kind is MeanKind.ARITHMETIC:
        return _special.log_cosh(x)
    if kind is MeanKind.ROOT_SQUARE:
        return 0.5 * _special.log_cosh(2.0 * x)
    if kind is MeanKind.LOGARITHMIC:
        return _special.log_sinhc(x)
    if kind is MeanKind.IDENTRIC:
        return _special.xcoth_m1(x)
    if kind is MeanKind.WEIGHTED_S:
        return x * math.tanh(x)
    raise TypeError(f"not a MeanKind: {kind!r}")


def mean(kind: MeanKind, p: PositivePair) -> float:
    """Value of the primitive mean ``kind`` at ``p``.

    L and I are extended continuously to the diagonal, ``L(a,a) = I(a,a) = a``.
    The result always lies in ``[min(a,b), max(a,b)]``.
    """
    if not isinstance(p, PositivePair):
        raise DomainError(f"expected a PositivePair, got {p!r}")
    hi, lo = max(p.a, p.b), min(p.a, p.b)
    if hi == lo:
        return hi
    if kind is MeanKind.ARITHMETIC:
        return 0.5 * hi + 0.5 * lo
    if kind is MeanKind.GEOMETRIC:
        return _geometric(hi, lo)
    if kind is MeanKind.ROOT_SQUARE:
        if 1e-150 < lo and hi < 1e150:
            return math.sqrt((hi * hi + lo * lo) / 2.0)
        return math.hypot(hi, lo) * math.sqrt(0.5)
    x = abs(half_log_ratio(p))
    if x > 0.5:
        # G * exp(log_ratio) would carry an error of x ulps in the exponent;
        # relative to hi every exponent below is O(1)
        t = 2.0 * x
        q = math.exp(-t)
        if kind is MeanKind.LOGARITHMIC:
            value = (hi - lo) / t
        elif kind is MeanKind.IDENTRIC:
            value = hi * math.exp(t * q / -math.expm1(-t) - 1.0)
        else:
            value = hi * math.exp(-t * q / (1.0 + q))
    else:
        value = _geometric(hi, lo) * math.exp(log_ratio(kind, x))
    return min(max(value, lo), hi)


def log_mean_ratio(kind: MeanKind, p: PositivePair) -> float:
    """log(M/G) at ``p``, computed from the half log-ratio rather than from M/G."""
    if not isinstance(p, PositivePair):
        raise DomainError(f"expected a PositivePair, got {p!r}")
    if p.a == p.b:
        return 0.0
    return log_ratio(kind, half_log_ratio(p))


def eval_expr(e: MeanExpr, p: PositivePair) -> float:
    """Evaluate a mean expression by direct composition of values."""
    if isinstance(e, Primitive):
        return mean(e.kind, p)
    if isinstance(e, Arg):
        return p.a if e.index == 0 else p.b
    if isinstance(e, Composed):
        u = eval_expr(e.left, p) ** e.power
        v = eval_expr(e.right, p) ** e.power
        return mean(e.outer, PositivePair(u, v))
    raise TypeError(f"not a MeanExpr: {e!r}")


def log_rel_expr(e: MeanExpr, x: float) -> tuple[int, float]:
    """Return ``(deg, r)`` with ``e(a, b) = G(a, b)**deg * exp(r)``.

    ``x`` is the signed half log-ratio of the pair. Working relative to the
    geometric mean keeps every intermediate small when a and b are close, so
    differences between expressions are resolved far below 1 ulp of the values.
    """
    if isinstance(e, Arg):
        return 1, (x if e.index == 0 else -x)
    if isinstance(e, Primitive):
        return 1, log_ratio(e.kind, x)
    if isinstance(e, Composed):
        deg, u = log_rel_expr(e.left, x)
        _, v = log_rel_expr(e.right, x)
        u *= e.power
        v *= e.power
        return e.power * deg, 0.5 * (u + v) + log_ratio(e.outer, 0.5 * (u - v))
    raise TypeError(f"not a MeanExpr: {e!r}")


# Shorthands used by the registry and the CLI.
A = Primitive(MeanKind.ARITHMETIC)
G = Primitive(MeanKind.GEOMETRIC)
L = Primitive(MeanKind.LOGARITHMIC)
I = Primitive(MeanKind.IDENTRIC)  # noqa: E741
S = Primitive(MeanKind.WEIGHTED_S)
Q = Primitive(MeanKind.ROOT_SQUARE)
ARG_A = Arg(0)
ARG_B = Arg(1)
