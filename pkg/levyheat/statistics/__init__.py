# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.statistics` module includes reference distributions and the
statistics comparing Monte Carlo samples with computed densities.
"""

from .distributions import Distribution, Cauchy, GridDistribution

from .statistics import KSResult, ks_critical_value, ks_distance, empirical_cf, CFCheck, cf_check
