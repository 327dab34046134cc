# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.frozen` module includes x-independent jump intensities,
their characteristic exponents, the densities obtained by Fourier inversion
and the nonlocal operators acting on them.
"""

from .kernels import (FrozenKernelSpec, AveragedKernel, directions, check_bounds,
                      check_odd_cancellation, constant_kernel, sign_asymmetric_kernel,
                      smooth_angular_kernel, time_modulated_kernel, KERNELS, kernel_from_config)
from .exponent import (RadialTransform, ExponentTable, characteristic_exponent,
                       frequency_cutoff, decay_at)
from .densities import (GridConfig, DEFAULT_GRID, GridDensity, SpectralPlan, density_fft,
                        density_scaled, gradient, tail_density, ratio_bracket, DependenceReport,
                        perturbation_sweep)
from .operators import (FIRST_ORDER, SECOND_DIFFERENCE, JumpPart, delta_phi_apply, drift_vector,
                        large_jump_rates, decompose_small_large, drifted_density)
