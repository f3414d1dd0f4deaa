"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`SpaceFormError`, so callers (and the CLI exit-code mapping) can
tell configuration mistakes from numerical failures.
"""


class SpaceFormError(Exception):
    """Base class."""


class ConfigurationError(SpaceFormError, ValueError):
    """Invalid parameters, unsupported curvature, degenerate domain description."""


class DomainError(ConfigurationError):
    """A point lies outside (or within 1e-12 of the boundary of) its chart."""


class PreconditionError(SpaceFormError, ValueError):
    """An operation was called on data violating its stated precondition."""


class NumericalError(SpaceFormError, ArithmeticError):
    """An iterative method failed to converge."""


class CoercivityError(NumericalError):
    """The discrete bilinear form is not positive definite.

    For K = +1 the weak problem is only coercive when the first
    Dirichlet-Neumann eigenvalue satisfies lambda_1(Omega) > (n+1) K.
    """


class InconsistencyError(SpaceFormError):
    """Computed data contradict the rigidity statement (e.g. c <= 0)."""
