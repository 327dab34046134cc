# Created on 2020/8/14

# This module is for storing built-in classes for exceptions.


class LevyHeatError(Exception):
    """Base class of all errors raised by the package."""

    def __init__(self, message="", diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class DomainError(LevyHeatError):
    """Raised when an argument lies outside the domain of an operation."""
    pass


class RangeError(LevyHeatError):
    """Raised when a value lies outside the numeric range of a scale function."""
    pass


class IndeterminateError(LevyHeatError):
    """Raised when partial integrals neither stabilize nor clearly diverge."""
    pass


class DivergenceError(LevyHeatError):
    """Raised when an integral required to be finite diverges."""
    pass


class NumericError(LevyHeatError):
    """Raised when a quadrature or root finder does not reach its tolerance."""
    pass


class ConvergenceError(NumericError):
    """Raised when the Picard series does not contract on the requested interval."""
    pass


class ResolutionError(NumericError):
    """Raised when a spatial grid is too coarse for the requested operation."""
    pass


class AccuracyError(NumericError):
    """Raised when an accumulated error budget (e.g. mass drift) is exceeded."""
    pass


class ConfigurationError(LevyHeatError):
    """Raised when provided configuration or grid settings are not satisfactory."""
    pass


class ModelError(LevyHeatError):
    """Raised when a jump intensity violates its declared bounds or cancellation."""
    pass


class StatisticsError(LevyHeatError):
    """Raised when a Monte Carlo path budget is too small for the requested statistic."""

    def __init__(self, message="", required=None, diagnostics=None):
        super().__init__(message, diagnostics)
        self.required = required


class HypothesisGateError(LevyHeatError):
    """Raised when the integrability hypothesis needed by the parametrix fails."""

    def __init__(self, message="", hypothesis="", diagnostics=None):
        super().__init__(message, diagnostics)
        self.hypothesis = hypothesis
