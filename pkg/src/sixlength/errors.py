"""Exception hierarchy shared by all modules."""


class SixLengthError(Exception):
    """Base class for errors raised by this package."""


class SumMismatch(SixLengthError, ValueError):
    """Degree sequence does not sum to its length."""


class NegativeDegree(SixLengthError, ValueError):
    pass


class InfeasibleParams(SixLengthError, ValueError):
    """Generator parameters cannot produce a sequence summing to n."""


class OracleLimitExceeded(SixLengthError):
    pass


class BudgetExceeded(SixLengthError):
    """Exhaustive enumeration would visit too many functions."""


class DomainError(SixLengthError, ValueError):
    pass


class NotEnoughDegreeOneVertices(SixLengthError):
    pass


class RegimeNotApplicable(SixLengthError):
    """The requested construction needs positive coalescence."""


class DegenerateBins(SixLengthError):
    """Too few usable bins remain for a goodness-of-fit statistic."""


class ConfigError(SixLengthError, ValueError):
    pass


class DegenerateRegimeWarning(UserWarning):
    """Asymptotic quantity evaluated at zero coalescence."""
