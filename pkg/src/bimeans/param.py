"""Hyperbolic parameterisation of a pair: a = G e^x, b = G e^-x."""

from __future__ import annotations

import math
from dataclasses import dataclass

from bimeans.errors import DegeneratePairError, DomainError
from bimeans.means import MeanKind, PositivePair, half_log_ratio, log_ratio, mean

__all__ = ["Param", "to_param", "from_param", "ratio"]


@dataclass(frozen=True)
class Param:
    x: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.x > 0 and math.isfinite(self.x)):
            raise DomainError(f"x must be a finite positive real, got {self.x!r}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"scale must be a finite positive real, got {self.scale!r}")


def to_param(p: PositivePair) -> Param:
    """Map a pair with distinct components to (x, G), x = |log(a/b)|/2."""
    if p.a == p.b:
        raise DegeneratePairError(f"components are equal ({p.a!r}); x would be 0")
    return Param(abs(half_log_ratio(p)), mean(MeanKind.GEOMETRIC, p))


def from_param(q: Param) -> PositivePair:
    """Inverse of :func:`to_param`; the first component is the larger one."""
    return PositivePair(q.scale * math.exp(q.x), q.scale * math.exp(-q.x))


def ratio(kind: MeanKind, x: float) -> float:
    """M/G as a function of x alone.

    >>> round(ratio(MeanKind.ARITHMETIC, 1.0), 12) == round(math.cosh(1.0), 12)
    True
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x!r}")
    return math.exp(log_ratio(kind, x))
