# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.moduli` module includes continuity moduli, their class
checks and the convolution inequalities of the weight h^ell_phi.
"""

from .moduli import (SLOWLY_VARYING, DINI, REGULARLY_VARYING, Modulus, ConvolutionReport,
                     power, log_power, constant, product, maximum, scaled, squared,
                     composite_phi, modulus_from_config, gamma_ell, ell_phi, M_phi_ell,
                     check_dini, potter_bound, h_ell_phi, s0_limit, verify_class_tag,
                     space_integral_h, verify_convolution)
