"""Exception hierarchy shared by all radbc modules."""


class RadbcError(Exception):
    """Base class for every error raised by radbc."""


class NumericalError(RadbcError):
    """A computation could not be completed to the requested accuracy."""


class DivisionNearZero(NumericalError):
    pass


class PoleProximity(NumericalError):
    pass


class ToleranceNotMet(NumericalError):
    pass


class DegenerateBound(NumericalError):
    pass


class InstabilityDetected(NumericalError):
    pass


class SingularStencil(NumericalError):
    pass


class OrderTooHigh(NumericalError):
    pass


class ResolutionError(NumericalError):
    pass


class UnknownFunction(RadbcError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ConfigError(RadbcError, ValueError):
    """Invalid simulation config; ``violations`` lists every failed check."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
