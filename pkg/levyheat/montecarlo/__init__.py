# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.montecarlo` module includes Monte Carlo samplers of the jump
processes and the exit and hitting statistics estimated from their paths.
"""

from .montecarlo import (SimConfig, DEFAULT_SIM, JumpIntensity, RadialSampler, small_jump_moments, SampleSet,
                         simulate_frozen, EulerEngine, euler_times, simulate_variable_euler, jump_intensity)
from .passage import (required_paths, check_budget, ExitTimeReport, exit_time_stats, HittingReport, hitting_prob_stats)
