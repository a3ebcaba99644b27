"""Registry of the orderings, identities and incomparabilities between the means.

Each side of a claim is a :class:`Term`: a mean expression, or a product,
positive combination, difference or logarithm of terms. Terms evaluate two ways:

* ``split(x)``: binary64, returns ``(K, r)`` with ``value = K * G**degree * exp(r)``,
  built on :func:`bimeans.means.log_rel_expr`;
* ``mp(a, b)``: mpmath value from the defining formulas, the independent route
  used to settle margins below the binary64 floor.
"""

from __future__ import annotations

import enum
import functools
import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Callable, Optional

from mpmath import mp

from bimeans import analysis, highprec
from bimeans import means as m
from bimeans.means import Composed, MeanExpr, MeanKind, expr_degree, log_rel_expr

__all__ = [
    "Term",
    "MeanTerm",
    "Const",
    "Monomial",
    "Sum",
    "Diff",
    "Log",
    "Kind",
    "InequalitySpec",
    "builtin_registry",
    "registry_by_name",
    "get_spec",
    "composed_exprs",
]


class Term:
    """Base class. ``split(x)`` returns ``(K, r)`` with value ``K * G**degree * exp(r)``.

    K collects the exact constant weights so that cancelling constants (such as
    the 2 and the 1/2 in ``2 I^2 / ((A^2 + G^2)/2 * 2)``) never pollute the small
    log-part r with a rounding error of size 1e-16.
    """

    degree: float

    def split(self, x: float) -> tuple[float, float]:
        raise NotImplementedError

    def mp(self, a, b):
        raise NotImplementedError

    def value(self, x: float, scale: float = 1.0) -> float:
        k, r = self.split(x)
        return k * math.exp(self.degree * math.log(scale) + r)

    @property
    def coef(self) -> float:
        """The constant K of :meth:`split`; depends only on the structure."""
        return 1.0

    def __mul__(self, other):
        if isinstance(other, (int, float, Fraction)):
            return Sum(tuple((w * Fraction(other), t) for w, t in _parts(self)))
        return Monomial(((self, 1.0), (other, 1.0)))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, float, Fraction)):
            return self.__mul__(1 / Fraction(other))
        return Monomial(((self, 1.0), (other, -1.0)))

    def __pow__(self, p):
        return Monomial(((self, float(p)),))

    def __add__(self, other):
        return Sum(_parts(self) + _parts(other))

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Const(float(other))
        return Diff(self, other)

    def __rsub__(self, other):
        return Diff(Const(float(other)), self)


def _parts(t: Term) -> tuple:
    return t.parts if isinstance(t, Sum) else ((Fraction(1), t),)


@dataclass(frozen=True, eq=False)
class MeanTerm(Term):
    expr: MeanExpr

    @property
    def degree(self):
        return expr_degree(self.expr)

    def split(self, x):
        return 1.0, log_rel_expr(self.expr, x)[1]

    def mp(self, a, b):
        return highprec.mp_eval_expr(self.expr, a, b)

    def __str__(self):
        return str(self.expr)


@dataclass(frozen=True, eq=False)
class Const(Term):
    val: float
    label: Optional[str] = None
    exact: Optional[Callable[[], object]] = None

    degree = 0

    def __post_init__(self):
        if not self.val > 0:
            raise ValueError("constants must be positive")

    @property
    def coef(self):
        return self.val

    def split(self, x):
        return self.val, 0.0

    def mp(self, a, b):
        return self.exact() if self.exact is not None else mp.mpf(self.val)

    def __str__(self):
        return self.label or f"{self.val:g}"


@dataclass(frozen=True, eq=False)
class Monomial(Term):
    """Product of terms raised to real powers."""

    factors: tuple

    @property
    def degree(self):
        return sum(t.degree * p for t, p in self.factors)

    @functools.cached_property
    def coef(self):
        k = 1.0
        for t, p in self.factors:
            k *= t.coef ** p
        return k

    def split(self, x):
        return self.coef, sum(p * t.split(x)[1] for t, p in self.factors)

    def mp(self, a, b):
        out = mp.mpf(1)
        for t, p in self.factors:
            out *= t.mp(a, b) ** (int(p) if p == int(p) else mp.mpf(p))
        return out

    def __str__(self):
        num, den = [], []
        for t, p in self.factors:
            s = _wrap(t)
            ap = abs(p)
            if ap == 0.5:
                s = f"sqrt({t})"
            elif ap != 1:
                s = f"{s}^{ap:g}"
            (num if p > 0 else den).append(s)
        text = "*".join(num) if num else "1"
        if den:
            text += "/" + (den[0] if len(den) == 1 else "(" + "*".join(den) + ")")
        return text


@dataclass(frozen=True, eq=False)
class Sum(Term):
    """Positive linear combination ``sum w_i t_i`` of terms of equal degree.

    Weights are exact fractions; the high-precision route must see exactly
    2/3, not its binary64 rounding.
    """

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple((Fraction(w), t) for w, t in self.parts))
        if any(not w > 0 for w, _ in self.parts):
            raise ValueError("weights must be positive")
        if len({t.degree for _, t in self.parts}) != 1:
            raise ValueError("summands must share one homogeneity degree")

    @property
    def degree(self):
        return self.parts[0][1].degree

    @functools.cached_property
    def _normalised(self):
        exact = [w * Fraction(t.coef) for w, t in self.parts]
        total = sum(exact)
        return float(total), [float(e / total) for e in exact]

    @property
    def coef(self):
        return self._normalised[0]

    def split(self, x):
        total, ws = self._normalised
        rs = [t.split(x)[1] for _, t in self.parts]
        if len(rs) == 1:
            return total, rs[0]
        top = max(rs)
        if top < 30.0:
            return total, math.log1p(sum(w * math.expm1(r) for w, r in zip(ws, rs)))
        return total, top + math.log(sum(w * math.exp(r - top) for w, r in zip(ws, rs)))

    def mp(self, a, b):
        return sum(
            (mp.mpf(w.numerator) / w.denominator * t.mp(a, b) for w, t in self.parts),
            mp.mpf(0),
        )

    def __str__(self):
        # (2*A + G)/3 rather than 2/3*A + 1/3*G
        den = math.lcm(*(w.denominator for w, _ in self.parts))
        body = " + ".join(
            _wrap(t) if w * den == 1 else f"{w * den}*{_wrap(t)}" for w, t in self.parts
        )
        if den == 1:
            return body
        if len(self.parts) > 1:
            body = f"({body})"
        return f"{body}/{den}"


@dataclass(frozen=True, eq=False)
class Diff(Term):
    """``left - right``; only meaningful where left > right."""

    left: Term
    right: Term

    def __post_init__(self):
        if self.left.degree != self.right.degree:
            raise ValueError("difference of terms with unequal degree")

    @property
    def degree(self):
        return self.left.degree

    @property
    def coef(self):
        return self.right.coef

    def split(self, x):
        kl, rl = self.left.split(x)
        kr, rr = self.right.split(x)
        d = rl - rr if kl == kr else math.log(kl / kr) + rl - rr
        if not d > 0:
            return kr, math.nan
        return kr, rr + math.log(math.expm1(d))

    def mp(self, a, b):
        return self.left.mp(a, b) - self.right.mp(a, b)

    def __str__(self):
        return f"({self.left} - {self.right})"


@dataclass(frozen=True, eq=False)
class Log(Term):
    """Natural log of a degree-0 term; only meaningful where that term exceeds 1."""

    inner: Term

    degree = 0

    def __post_init__(self):
        if self.inner.degree != 0:
            raise ValueError("log of a term that is not scale free")

    def split(self, x):
        k, r = self.inner.split(x)
        v = r if k == 1.0 else math.log(k) + r
        return 1.0, (math.log(v) if v > 0 else math.nan)

    def mp(self, a, b):
        return mp.log(self.inner.mp(a, b))

    def __str__(self):
        return f"log({self.inner})"


def _wrap(t):
    s = str(t)
    if isinstance(t, Sum) and len(t.parts) > 1 and not s.startswith("("):
        return f"({s})"
    return s


def sqrt(t: Term) -> Term:
    return Monomial(((t, 0.5),))


def log(t: Term) -> Term:
    return Log(t)


class Kind(str, enum.Enum):
    CHAIN = "StrictChain"
    IDENTITY = "Identity"
    INCOMPARABLE = "Incomparable"


RELATIONS = ("<", ">", "=")


@dataclass(frozen=True, eq=False)
class InequalitySpec:
    """One registry entry.

    ``relations[i]`` relates ``terms[i]`` to ``terms[i+1]``. For Incomparable
    entries ``witnesses`` pins points where each of the two orderings holds,
    each as ``(x, relation of terms[0] to terms[1])``.
    """

    name: str
    kind: Kind
    terms: tuple
    relations: tuple = ()
    statement: str = ""
    domain: tuple = (0.0, math.inf)
    witnesses: tuple = ()

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueError(f"{self.name}: need at least two terms")
        if len({t.degree for t in self.terms}) != 1:
            raise ValueError(f"{self.name}: terms differ in homogeneity degree")
        if self.kind is Kind.INCOMPARABLE:
            if len(self.terms) != 2:
                raise ValueError(f"{self.name}: incomparable entries compare exactly two terms")
            if {r for _, r in self.witnesses} != {"<", ">"} and self.witnesses:
                raise ValueError(f"{self.name}: witnesses must realise both orderings")
        else:
            rels = self.relations or (("=",) * (len(self.terms) - 1) if self.kind is Kind.IDENTITY else ())
            if len(rels) != len(self.terms) - 1 or any(r not in RELATIONS for r in rels):
                raise ValueError(f"{self.name}: need one relation in {RELATIONS} per adjacent pair")
            if self.kind is Kind.IDENTITY and set(rels) != {"="}:
                raise ValueError(f"{self.name}: identities use '=' only")
            object.__setattr__(self, "relations", tuple(rels))

    def render(self) -> str:
        if self.kind is Kind.INCOMPARABLE:
            return f"{self.terms[0]}  <?>  {self.terms[1]}"
        out = str(self.terms[0])
        for rel, t in zip(self.relations, self.terms[1:]):
            out += f" {rel} {t}"
        return out


def _t(e: MeanExpr) -> MeanTerm:
    return MeanTerm(e)


def _comp(outer: MeanKind, left: MeanExpr, right: MeanExpr, power: int = 1) -> MeanTerm:
    return MeanTerm(Composed(outer, left, right, power))


@functools.lru_cache(maxsize=None)
def upper_constant_c() -> Const:
    x1 = analysis.extremum_lemma2()
    c = math.exp(analysis.f_lemma2(x1) - 2.0)
    return Const(c, "c", highprec.sharp_c)


def _chain(name, terms, rels, statement):
    return InequalitySpec(name, Kind.CHAIN, tuple(terms), tuple(rels), statement)


def _identity(name, terms, statement):
    return InequalitySpec(name, Kind.IDENTITY, tuple(terms), statement=statement)


def _incomparable(name, left, right, witnesses, statement):
    return InequalitySpec(name, Kind.INCOMPARABLE, (left, right), statement=statement,
                          witnesses=tuple(witnesses))


@functools.lru_cache(maxsize=None)
def _build() -> tuple:
    A, G, L, I, S, Q = (_t(e) for e in (m.A, m.G, m.L, m.I, m.S, m.Q))
    K = MeanKind
    one = Const(1.0, "1", lambda: mp.mpf(1))
    two_over_sqrt_e = Const(2.0 / math.sqrt(math.e), "2/sqrt(e)", lambda: 2 / mp.sqrt(mp.e))
    c = upper_constant_c()

    I_A2G2 = _comp(K.IDENTRIC, m.A, m.G, 2)
    Q_AG = _comp(K.ROOT_SQUARE, m.A, m.G)
    I_a2b2 = _comp(K.IDENTRIC, m.ARG_A, m.ARG_B, 2)
    L_A2G2 = _comp(K.LOGARITHMIC, m.A, m.G, 2)
    L_AG = _comp(K.LOGARITHMIC, m.A, m.G)
    L_IG = _comp(K.LOGARITHMIC, m.I, m.G)
    L_IL = _comp(K.LOGARITHMIC, m.I, m.L)
    L_I2G2 = _comp(K.LOGARITHMIC, m.I, m.G, 2)
    L_a2b2 = _comp(K.LOGARITHMIC, m.ARG_A, m.ARG_B, 2)
    S_QG = _comp(K.WEIGHTED_S, m.Q, m.G)
    S_AG = _comp(K.WEIGHTED_S, m.A, m.G)
    I_QG = _comp(K.IDENTRIC, m.Q, m.G)

    half_AG = (A + G) / 2
    thm2_mid = 2 * I ** 2 / (A ** 2 + G ** 2)

    return (
        _chain("thm1", [one, I / sqrt(I_A2G2), two_over_sqrt_e], "<<",
               "1 < I/sqrt(I(A^2,G^2)) < 2/sqrt(e); the ratio tends to 1 as x -> 0 and to 2/sqrt(e) as x -> inf"),
        _chain("thm2", [one, thm2_mid, c], "<<",
               "1 < 2I^2/(A^2+G^2) <= c; c = 1.1402... is the maximum of the middle term, reached only at "
               "x1 = 1.6061..., which no default grid point hits"),
        _chain("chain_3005c", [I, Q_AG, sqrt(I_A2G2)], ">>",
               "I > Q(A,G) > sqrt(I(A^2,G^2))"),
        _chain("sandor_sq", [I_a2b2, I ** 2], ">", "I(a^2,b^2) > I(a,b)^2"),
        _chain("eq3005e", [I, (2 * A + G) / 3], ">", "I > (2A+G)/3"),
        _chain("eq3005f", [I ** 2, (2 * A ** 2 + G ** 2) / 3], "<", "I^2 < (2A^2+G^2)/3"),
        _chain("thm3_chain", [L_A2G2, half_AG * L_AG, half_AG * L, L ** 2], "=>>",
               "L(A^2,G^2) = ((A+G)/2) L(A,G) > ((A+G)/2) L > L^2"),
        _chain("thm3_LIG", [L_IG, L], "<", "L(I,G) < L"),
        _chain("thm3_LIL", [L, L_IL, L * (I - L) / (L - G)], "<<",
               "L < L(I,L) < L (I-L)/(L-G)"),
        _chain("coro_711a", [G * I / L, sqrt(I * G), L_IG, L], "<<<",
               "G I/L < sqrt(I G) < L(I,G) < L"),
        _chain("coro_711b", [L_IG ** 2, L * L_IG, L_I2G2, L * (I + G) / 2], "<<<",
               "L(I,G)^2 < L L(I,G) < L(I^2,G^2) < L (I+G)/2"),
        _chain("in_10", [L, (I + G) / 2], "<", "L < (I+G)/2"),
        _chain("eq611d", [L, half_AG], "<", "L < (A+G)/2"),
        _identity("identity_S", [S, I_a2b2 / I], "S(a,b) = I(a^2,b^2)/I(a,b)"),
        _chain("thm4_chain", [S_QG, A, I], ">>", "S(Q,G) > A > I"),
        _chain("thm4_IQG", [I_QG, A], "<", "I(Q,G) < A"),
        _chain("rasa_SQ", [S, Q], ">", "S > Q"),
        _chain("alzer_sum", [I + L, A + G], "<", "I + L < A + G"),
        _identity("identity_AL", [log(I / G), A / L - 1], "log(I/G) = A/L - 1"),
        _chain("sandor_in12", [log(I / L), 1 - G / L], ">", "log(I/L) > 1 - G/L"),
        _chain("alzer_LGI", [L, sqrt(G * I)], ">", "L > sqrt(G I)"),
        _chain("seiffert_L2", [L_A2G2, L ** 2], ">", "L(A^2,G^2) > L^2"),
        _chain("ns_LAG", [L_AG, L], ">", "L(A,G) > L"),
        _incomparable("incomparable_I_SAG", I, S_AG, [(1.0, ">"), (3.0, "<")],
                      "I and S(A,G) are not comparable; they cross at x = 2.2788..."),
        _incomparable("incomparable_I_IQG", I, I_QG, [(1.5, "<"), (2.0, ">")],
                      "I and I(Q,G) are not comparable; they cross at x = 1.7670..."),
        _incomparable("noncomparable_thm2_3005e", Q_AG, (2 * A + G) / 3, [(1.0, "<"), (4.0, ">")],
                      "the lower bounds Q(A,G) and (2A+G)/3 for I cross at x = 2.6339..."),
        _incomparable("noncomparable_3005f_thm2right", (2 * A ** 2 + G ** 2) / 3,
                      c * (A ** 2 + G ** 2) / 2, [(0.5, "<"), (3.0, ">")],
                      "the upper bounds (2A^2+G^2)/3 and c (A^2+G^2)/2 for I^2 cross at x = 1.0195..."),
        _chain("classical_chain", [G, L, I, A, Q, S], "<<<<<", "G < L < I < A < Q < S"),
        _identity("identity_Lsq", [L_a2b2, A * L], "L(a^2,b^2) = A(a,b) L(a,b)"),
    )


def builtin_registry() -> list[InequalitySpec]:
    return list(_build())


def registry_by_name() -> dict[str, InequalitySpec]:
    return {s.name: s for s in _build()}


def get_spec(name: str) -> InequalitySpec:
    from bimeans.errors import UnknownSpecError

    try:
        return registry_by_name()[name]
    except KeyError:
        raise UnknownSpecError(f"unknown registry entry {name!r}") from None


def _children(t: Term):
    if isinstance(t, Monomial):
        return [f for f, _ in t.factors]
    if isinstance(t, Sum):
        return [f for _, f in t.parts]
    if isinstance(t, Diff):
        return [t.left, t.right]
    if isinstance(t, Log):
        return [t.inner]
    return []


def composed_exprs() -> list[MeanExpr]:
    """Every composed mean that occurs in the registry, first occurrence order."""
    seen = {}
    stack = [t for s in reversed(_build()) for t in reversed(s.terms)]
    while stack:
        t = stack.pop()
        if isinstance(t, MeanTerm) and isinstance(t.expr, Composed):
            seen.setdefault(str(t.expr), t.expr)
        stack.extend(reversed(_children(t)))
    return list(seen.values())
