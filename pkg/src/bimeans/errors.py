"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a mean or auxiliary function."""


class DegeneratePairError(DomainError):
    """The pair has equal components, so the hyperbolic parameter would be 0."""


class NoSignChangeError(ValueError):
    """A root bracket does not certify a sign change."""


class ConvergenceError(RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class GridDomainError(ValueError):
    """A verification grid leaves the domain of the inequality being checked."""


class UnknownSpecError(LookupError):
    """No registry entry carries the requested name."""
