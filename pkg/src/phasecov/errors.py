"""Exception types raised by the numerical routines."""


class PhaseCovError(Exception):
    """Base class for all library errors."""


class InvalidStateError(PhaseCovError, ValueError):
    """A density matrix violates trace, Hermiticity or positivity."""


class QuadratureError(PhaseCovError):
    """Adaptive quadrature failed to reach the requested tolerance.

    ``interval`` is the subinterval carrying the largest error estimate
    when the refinement budget ran out.
    """

    def __init__(self, message, interval=None, error=None):
        super().__init__(message)
        self.interval = interval
        self.error = error


class SingularRateError(PhaseCovError):
    """A rate function diverges (the decoherence function has a zero)."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class DivergentIntegrandError(PhaseCovError):
    """A time-averaged norm integrand exceeded the hard bound."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class PuritySingularityError(PhaseCovError):
    """The mixed-state purity factor has a vanishing denominator."""


class PathConstraintError(PhaseCovError, ValueError):
    """A control path leaves the admissible region."""


class ConfigError(PhaseCovError, ValueError):
    """Malformed scenario configuration."""

    def __init__(self, message, line=None, key=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.key = key
