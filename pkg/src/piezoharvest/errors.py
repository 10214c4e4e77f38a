"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """A physical argument is outside the model's domain (wrong sign, NaN, ...)."""


class ConfigurationError(ValueError):
    """A run configuration is unusable: step size too coarse, unknown sweep
    parameter, malformed scenario file, and similar."""


class ValidationError(ValueError):
    """A scenario violates one or more invariants.  Carries the full list so
    callers can report every problem at once."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class CalibrationError(RuntimeError):
    """The parameter fit did not converge.  Carries the best residual seen."""

    def __init__(self, message, best_residual=None):
        self.best_residual = best_residual
        super().__init__(message)


class ComparisonError(ValueError):
    """Two charge curves cannot be compared (empty or disjoint time spans)."""
