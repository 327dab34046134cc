# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"


"""
The :mod:`levyheat.exceptions` module includes classes for exceptions and errors.
"""

from .exceptions import (LevyHeatError, DomainError, RangeError, IndeterminateError,
                         DivergenceError, NumericError, ConvergenceError, ResolutionError,
                         ConfigurationError, ModelError, StatisticsError,
                         HypothesisGateError, AccuracyError)
