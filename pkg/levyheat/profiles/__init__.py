# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.profiles` module includes the radial scale functions phi,
their built-in families and the numeric checks attached to them.
"""

from .profiles import (CASE1, CASE2, CASE3, COMPENSATOR_NONE, COMPENSATOR_TRUNCATED,
                       COMPENSATOR_FULL, COMPENSATOR_OF_CASE, ScalingProfile, BoundReport,
                       power_law, piecewise_power, power_mixture, harmonic_mixture,
                       log_linear, tabulated, from_callable, profile_from_config,
                       eval_phi, eval_phi_inverse, c0_phi, classify_case, default_lattice,
                       verify_scaling_bounds, compute_A_phi, rho, comparability_constant)
