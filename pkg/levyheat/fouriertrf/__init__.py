# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.fouriertrf` module includes methods for Fourier transforms.
"""

from .fouriertrf import (FourierGrid, make_grid, inverse_transform, spectral_derivative,
                         inverse_transform_at)
