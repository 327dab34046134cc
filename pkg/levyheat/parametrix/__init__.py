# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.parametrix` module includes the Levi construction of the heat
kernel for position-dependent jump intensities, its contraction constants and its
extension to long time intervals.
"""

from .kernels import (HYPOTHESIS_SYMMETRIC, HYPOTHESIS_GENERAL, ParametrixConfig, DEFAULT_PARAMETRIX,
                      graded_nodes, VariableKernelSpec, sine_modulated_kernel, x_constant_kernel,
                      VARIABLE_KERNELS, variable_kernel_from_config)
from .levi import (DIRECT, CHAPMAN_KOLMOGOROV, same_grid, SymbolBank, DefectField, QKernel, picard_step,
                   solve_q, HeatKernelField, assemble_p, q0)
from .estimates import (ContractionConstants, contraction_constants, epsilon0, HolderReport, holder_sweep,
                        NearDiagonalReport, near_diagonal_sweep, two_sided_ratio)
from .extension import (FORWARD, BACKWARD, compose, extend_ck, heat_kernel, CKReport, ck_residual, bump,
                        DuhamelReport, duhamel_check)
