"""Two-argument means (A, G, L, I, S, Q), their orderings and the sharp constants between them.

Everything is computed through the hyperbolic parameter ``x = log(a/b)/2``,
where each mean divided by G is an elementary function of x alone.
"""

from bimeans.analysis import (
    SharpConstant,
    extremum_lemma2,
    f_lemma2,
    f_thm1,
    find_root,
    sharp_constants,
)
from bimeans.errors import (
    ConvergenceError,
    DegeneratePairError,
    DomainError,
    GridDomainError,
    NoSignChangeError,
    UnknownSpecError,
)
from bimeans.inequalities import InequalitySpec, Kind, builtin_registry, get_spec
from bimeans.means import (
    A,
    ARG_A,
    ARG_B,
    G,
    I,
    L,
    Q,
    S,
    Composed,
    MeanKind,
    PositivePair,
    Primitive,
    eval_expr,
    mean,
)
from bimeans.param import Param, from_param, ratio, to_param
from bimeans.verification import DEFAULT_GRID, Grid, VerificationReport, verify, verify_all

__version__ = "0.1.0"

__all__ = [
    "A", "G", "L", "I", "S", "Q", "ARG_A", "ARG_B",
    "Composed", "MeanKind", "PositivePair", "Primitive", "eval_expr", "mean",
    "Param", "from_param", "ratio", "to_param",
    "SharpConstant", "extremum_lemma2", "f_lemma2", "f_thm1", "find_root", "sharp_constants",
    "InequalitySpec", "Kind", "builtin_registry", "get_spec",
    "DEFAULT_GRID", "Grid", "VerificationReport", "verify", "verify_all",
    "ConvergenceError", "DegeneratePairError", "DomainError", "GridDomainError",
    "NoSignChangeError", "UnknownSpecError",
]
