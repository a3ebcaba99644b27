import math
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp

from bimeans import highprec
from bimeans.errors import UnknownSpecError
from bimeans.inequalities import (
    Const,
    InequalitySpec,
    Kind,
    MeanTerm,
    Sum,
    builtin_registry,
    composed_exprs,
    get_spec,
    registry_by_name,
    upper_constant_c,
)
from bimeans.means import A, G, I, L, MeanKind, PositivePair, half_log_ratio
from bimeans.verification import REFINE_BELOW, _float_margin, _Point

REQUIRED = [
    "thm1", "thm2", "chain_3005c", "sandor_sq", "eq3005e", "eq3005f", "thm3_chain",
    "thm3_LIG", "thm3_LIL", "coro_711a", "coro_711b", "in_10", "eq611d", "identity_S",
    "thm4_chain", "thm4_IQG", "rasa_SQ", "alzer_sum", "identity_AL", "sandor_in12",
    "alzer_LGI", "seiffert_L2", "ns_LAG", "incomparable_I_SAG", "incomparable_I_IQG",
    "noncomparable_thm2_3005e", "noncomparable_3005f_thm2right",
]

SAMPLE_X = [float(x) for x in np.geomspace(1e-4, 30, 25)]


def test_registry_contents():
    reg = builtin_registry()
    names = [s.name for s in reg]
    assert len(names) == len(set(names))
    assert len(reg) >= 27
    assert set(REQUIRED) <= set(names)
    ordering = [s for s in reg if s.kind is not Kind.INCOMPARABLE]
    assert len(ordering) == 25
    assert sum(s.kind is Kind.INCOMPARABLE for s in reg) == 4


def test_every_incomparable_has_both_witnesses():
    for s in builtin_registry():
        if s.kind is Kind.INCOMPARABLE:
            assert {rel for _, rel in s.witnesses} == {"<", ">"}


def test_first_link_of_thm3_chain_is_an_identity():
    assert get_spec("thm3_chain").relations[0] == "="


def test_get_spec_unknown():
    with pytest.raises(UnknownSpecError):
        get_spec("no_such_entry")
    assert issubclass(UnknownSpecError, LookupError)


def test_registry_is_cached_but_list_is_fresh():
    a, b = builtin_registry(), builtin_registry()
    assert a is not b and all(x is y for x, y in zip(a, b))
    assert registry_by_name()["thm1"] is a[0]


def test_spec_validation():
    a, g, l = MeanTerm(A), MeanTerm(G), MeanTerm(L)
    with pytest.raises(ValueError):
        InequalitySpec("x", Kind.CHAIN, (a,), ("<",))
    with pytest.raises(ValueError):
        InequalitySpec("x", Kind.CHAIN, (a, g, l), ("<",))
    with pytest.raises(ValueError):
        InequalitySpec("x", Kind.CHAIN, (a, g), ("~",))
    with pytest.raises(ValueError):
        InequalitySpec("x", Kind.CHAIN, (a, a * g), (">",))
    with pytest.raises(ValueError):
        InequalitySpec("x", Kind.IDENTITY, (a, g), ("<",))
    with pytest.raises(ValueError):
        InequalitySpec("x", Kind.INCOMPARABLE, (a, g, l))
    with pytest.raises(ValueError):
        InequalitySpec("x", Kind.INCOMPARABLE, (a, g), witnesses=((1.0, "<"),))
    ident = InequalitySpec("x", Kind.IDENTITY, (a, a))
    assert ident.relations == ("=",)


def test_render():
    assert get_spec("thm4_chain").render() == "S(Q,G) > A > I"
    assert get_spec("eq3005e").render() == "I > (2*A + G)/3"
    assert "<?>" in get_spec("incomparable_I_SAG").render()


def test_sum_keeps_exact_weights():
    t = (2 * MeanTerm(A) + MeanTerm(G)) / 3
    assert isinstance(t, Sum)
    assert [w for w, _ in t.parts] == [Fraction(2, 3), Fraction(1, 3)]
    assert t.coef == 1.0


def test_constant_factors_cancel_exactly():
    # 2 I^2/(A^2 + G^2): the 2 and the total weight 2 of the sum cancel
    thm2_mid = get_spec("thm2").terms[1]
    assert thm2_mid.coef == 1.0


def test_term_errors_flag_invalid_region():
    d = MeanTerm(L) - MeanTerm(I)  # negative everywhere
    assert math.isnan(d.split(0.5)[1])
    with pytest.raises(ValueError):
        MeanTerm(A) - MeanTerm(A) * MeanTerm(G)
    with pytest.raises(ValueError):
        Const(-1.0)


def test_upper_constant_matches_high_precision():
    c = upper_constant_c()
    with mp.workdps(30):
        assert c.val == pytest.approx(float(c.exact()), rel=1e-15)


@pytest.mark.parametrize("spec", builtin_registry(), ids=lambda s: s.name)
def test_float_terms_match_definitions(spec):
    for x in SAMPLE_X:
        a, b = math.exp(x), math.exp(-x)
        xh = half_log_ratio(PositivePair(a, b))
        with mp.workdps(highprec.digits_for(x) + 10):
            ma, mb = mp.mpf(a), mp.mpf(b)
            g = mp.sqrt(ma * mb)
            for t in spec.terms:
                k, r = t.split(xh)
                want = t.mp(ma, mb) / g ** t.degree
                assert abs(k * mp.exp(r) / want - 1) <= 2e-14


@pytest.mark.parametrize("spec", builtin_registry(), ids=lambda s: s.name)
def test_trusted_float_margins_agree_with_high_precision(spec):
    """Where the verifier keeps the binary64 margin, the mpmath margin agrees with it."""
    for x in SAMPLE_X:
        pt = _Point(spec, x, 1.0)
        for i in range(len(spec.terms) - 1):
            m, floor = _float_margin(pt.splits[i], pt.splits[i + 1])
            if not abs(m) > REFINE_BELOW * floor:
                continue
            dps, vals = pt.mp_values()
            with mp.workdps(dps):
                exact = float((vals[i] - vals[i + 1]) / vals[i + 1])
            assert (m > 0) == (exact > 0)
            assert m == pytest.approx(exact, rel=1e-4)


def test_composed_exprs_cover_registry():
    names = [str(e) for e in composed_exprs()]
    assert len(names) == len(set(names))
    for want in ("I(A^2,G^2)", "L(I,G)", "L(I^2,G^2)", "S(Q,G)", "I(Q,G)", "S(A,G)", "I(a^2,b^2)"):
        assert want in names
    assert all(e.outer in MeanKind for e in composed_exprs())
