import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from bimeans.errors import DegeneratePairError, DomainError
from bimeans.means import MeanKind, PositivePair, mean
from bimeans.param import Param, from_param, ratio, to_param

KINDS = list(MeanKind)


def test_to_param_examples():
    q = to_param(PositivePair(math.e ** 2, 1.0))
    assert q.x == pytest.approx(1.0, rel=1e-15)
    assert q.scale == pytest.approx(math.e, rel=1e-15)
    q = to_param(PositivePair(4, 1))
    assert (q.x, q.scale) == (pytest.approx(math.log(2), rel=1e-15), 2.0)
    q = to_param(PositivePair(3 * math.exp(0.7), 3 * math.exp(-0.7)))
    assert q.x == pytest.approx(0.7, rel=1e-14)
    assert q.scale == pytest.approx(3.0, rel=1e-15)


def test_orientation_does_not_matter():
    assert to_param(PositivePair(1, 4)) == to_param(PositivePair(4, 1))


def test_from_param_examples():
    p = from_param(Param(math.log(2), 2.0))
    assert (p.a, p.b) == (pytest.approx(4.0, rel=1e-15), pytest.approx(1.0, rel=1e-15))
    p = from_param(Param(1.0))
    assert (p.a, p.b) == (math.e, math.exp(-1.0))
    assert p.a > p.b


def test_degenerate_pair():
    with pytest.raises(DegeneratePairError):
        to_param(PositivePair(2.5, 2.5))
    assert issubclass(DegeneratePairError, DomainError)


@pytest.mark.parametrize("x,scale", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (math.nan, 1.0), (1.0, math.inf)])
def test_param_rejects_invalid(x, scale):
    with pytest.raises(DomainError):
        Param(x, scale)


@pytest.mark.parametrize("x", [0.0, -0.5])
def test_ratio_rejects_non_positive(x):
    with pytest.raises(DomainError):
        ratio(MeanKind.ARITHMETIC, x)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-2, 50.0), st.floats(1e-3, 1e3))
def test_param_round_trip(x, scale):
    # recovering x from e^x and e^-x costs eps/x relatively, hence x >= 1e-2
    q = to_param(from_param(Param(x, scale)))
    assert q.x == pytest.approx(x, rel=1e-13)
    assert q.scale == pytest.approx(scale, rel=1e-13)


@settings(max_examples=300, deadline=None)
@given(st.floats(-6, 6), st.floats(1e-12, 14.0))
def test_pair_round_trip(s, log_r):
    p = PositivePair(10.0 ** s * math.exp(log_r), 10.0 ** s)
    back = from_param(to_param(p))
    assert back.a == pytest.approx(p.a, rel=1e-13)
    assert back.b == pytest.approx(p.b, rel=1e-13)


def test_scale_invariance_of_x():
    p = PositivePair(3.7, 1.3)
    for t in (1e-6, 1e6, 7.0):
        assert to_param(p.scaled(t)).x == pytest.approx(to_param(p).x, rel=1e-13)


def test_ratio_closed_forms():
    x = 1.0
    assert ratio(MeanKind.ARITHMETIC, x) == pytest.approx(math.cosh(x), rel=1e-15)
    assert ratio(MeanKind.GEOMETRIC, x) == 1.0
    assert ratio(MeanKind.IDENTRIC, x) == pytest.approx(math.exp(x / math.tanh(x) - 1), rel=1e-15)
    assert ratio(MeanKind.ROOT_SQUARE, x) == pytest.approx(math.sqrt(math.cosh(2 * x)), rel=1e-15)
    assert ratio(MeanKind.WEIGHTED_S, x) == pytest.approx(math.exp(math.tanh(x)), rel=1e-15)
    # (e - 1/e)/log(e^2) from the definition
    with mp.workdps(50):
        e = mp.e
        want = float((e - 1 / e) / mp.log(e * e))
    assert ratio(MeanKind.LOGARITHMIC, x) == pytest.approx(want, rel=1e-15)
    assert ratio(MeanKind.LOGARITHMIC, x) == pytest.approx(1.1752012, abs=1e-7)


GRID = np.geomspace(1e-6, 50.0, 400)


@pytest.mark.parametrize("kind", KINDS)
def test_ratio_consistent_with_means(kind):
    for x in GRID:
        p = from_param(Param(float(x)))
        direct = mean(kind, p) / mean(MeanKind.GEOMETRIC, p)
        r = ratio(kind, float(x))
        assert abs(r - direct) / r <= 1e-12


@pytest.mark.parametrize("kind", [k for k in KINDS if k is not MeanKind.GEOMETRIC])
def test_ratio_monotone(kind):
    vals = [ratio(kind, float(x)) for x in GRID]
    # the first few grid points differ by less than an ulp
    tail = [v for v, x in zip(vals, GRID) if x > 1e-4]
    assert all(u <= v for u, v in zip(vals, vals[1:]))
    assert all(u < v for u, v in zip(tail, tail[1:]))


@pytest.mark.parametrize("kind", KINDS)
def test_ratio_limit_at_zero(kind):
    assert abs(ratio(kind, 1e-8) - 1.0) <= 1e-7
