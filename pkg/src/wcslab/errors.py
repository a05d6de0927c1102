"""Exception hierarchy.

Two families matter to callers: ``ValidationError`` for inputs that are out of
range before any numerics run, and ``NumericalError`` for failures discovered
while computing (flow escape, composition range, divergence). The CLI maps
them to distinct exit codes.
"""


class WcsLabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(WcsLabError, ValueError):
    """Input parameters violate a documented precondition."""


class InvalidClosedFormError(ValidationError):
    pass


class InvalidGeneratorError(ValidationError):
    pass


class TrivialGeneratorError(ValidationError):
    pass


class UnsupportedWeightError(ValidationError):
    pass


class InvalidWitnessError(ValidationError):
    pass


class NumericalError(WcsLabError, ArithmeticError):
    """A computation could not be completed to the requested accuracy."""


class OutOfValidityError(NumericalError):
    """Evaluation requested outside the disk where a truncated series is trusted."""


class CompositionRangeError(NumericalError):
    pass


class FlowEscapeError(NumericalError):
    """An integrated trajectory reached the unit circle."""


class KoenigsSingularityError(NumericalError):
    pass


class SymbolZeroError(NumericalError):
    pass


class DivergenceError(NumericalError):
    """A norm that must be finite was found to diverge."""
