# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
LevyHeat computes and validates heat kernels of nonlocal operators whose jump
intensities kappa(t, x, z)/(|z|^d phi(|z|)) vary in time and space.
"""

from . import exceptions
from . import quadrature
from . import profiles
from . import moduli
from . import fouriertrf
from . import frozen
from . import parametrix
from . import montecarlo
from . import statistics
from . import harness
