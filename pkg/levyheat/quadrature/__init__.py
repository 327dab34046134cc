# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.quadrature` module includes graded quadrature over decades
and the detection of divergent integrals.
"""

from .quadrature import (QuadratureConfig, DEFAULT_QUADRATURE, Divergent, is_divergent,
                         SeriesVerdict, quad_log, quad_linear, assess_series,
                         integrate_to_zero, integrate_to_infinity, integrate_positive_axis)
