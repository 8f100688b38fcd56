"""Error taxonomy shared by every module.

Each class maps to one failure category of the public contracts: callers can
catch the base class or a specific category, and the CLI maps categories to
exit codes (usage/validity -> 2, numerical -> 3).
"""


class FeynkacError(Exception):
    """Base class for all package errors."""


class DomainError(FeynkacError):
    """Argument outside the mathematical domain of the operation (x <= 0 etc.)."""


class ValidityError(FeynkacError):
    """Parameter outside a catalog entry's documented validity region."""


class PoleError(FeynkacError):
    """Evaluation at a parameter pole (e.g. 1F1 with non-positive-integer b)."""


class EvalOverflowError(FeynkacError):
    """Unscaled evaluation would overflow double precision; use the scaled variant."""


class ConvergenceError(FeynkacError):
    """Quadrature, series or tail estimate failed to converge to tolerance."""


class CapabilityError(FeynkacError):
    """Request is outside what the implementation supports (documented gap)."""


class ConditioningError(FeynkacError):
    """Linear-algebra subproblem too ill-conditioned to trust (degenerate grid)."""


class SingularDriftError(FeynkacError):
    """Constructed drift has a pole inside the evaluation domain."""


class ConstructionError(FeynkacError):
    """A constructed object failed its own residual self-check."""


class InstabilityError(FeynkacError):
    """Order-doubling diagnostic of the Laplace inverter detected a non-smooth target."""


class SchemeError(FeynkacError):
    """Monte Carlo scheme failure (path explosion / NaN rate above threshold)."""
