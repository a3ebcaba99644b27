"""Cancellation-free elementary kernels used by the means and the proof functions.

Every function here takes a real ``y`` and keeps full relative accuracy near
``y = 0``, which is where the means collapse onto the geometric mean and the
naive formulas lose all their digits.
"""

import math

LN2 = math.log(2.0)

# Below this magnitude the odd power series converge to full precision in < 20 terms.
_SERIES_CUTOFF = 1.0


def sinh_minus_id(y):
    """sinh(y) - y."""
    if abs(y) >= _SERIES_CUTOFF:
        return math.sinh(y) - y
    y2 = y * y
    term = y * y2 / 6.0
    total = term
    k = 3
    while abs(term) > 1e-17 * abs(total):
        term *= y2 / ((k + 1) * (k + 2))
        total += term
        k += 2
    return total


def xcosh_minus_sinh(y):
    """y*cosh(y) - sinh(y) = sum_{k>=1} 2k y^(2k+1) / (2k+1)!."""
    if abs(y) >= _SERIES_CUTOFF:
        return y * math.cosh(y) - math.sinh(y)
    y2 = y * y
    # power / (2k+1)! carried in ``p``; coefficient 2k applied separately
    p = y * y2 / 6.0
    total = 2.0 * p
    k = 1
    while True:
        p *= y2 / ((2 * k + 2) * (2 * k + 3))
        k += 1
        term = 2 * k * p
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total


def sinhc_m1(y):
    """sinh(y)/y - 1, with the value 0 at y = 0."""
    if y == 0.0:
        return 0.0
    return sinh_minus_id(y) / y


def log_sinhc(y):
    """log(sinh(y)/y), finite for every real y."""
    t = abs(y)
    if t > 20.0:
        return t - LN2 + math.log1p(-math.exp(-2.0 * t)) - math.log(t)
    return math.log1p(sinhc_m1(t))


def xcoth_m1(y):
    """y*coth(y) - 1, with the value 0 at y = 0."""
    t = abs(y)
    if t == 0.0:
        return 0.0
    if t < _SERIES_CUTOFF:
        return xcosh_minus_sinh(t) / math.sinh(t)
    return t / math.tanh(t) - 1.0


def log_cosh(y):
    """log(cosh(y)) without overflow for large |y|."""
    t = abs(y)
    if t < 1.0:
        s = math.sinh(0.5 * t)
        return math.log1p(2.0 * s * s)
    return t - LN2 + math.log1p(math.exp(-2.0 * t))
