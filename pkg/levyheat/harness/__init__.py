# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.harness` module includes the experiment configuration,
the validation commands, their reports and the command line interface.
"""

from .config import (FROZEN, VARIABLE, DEFAULT_TOLERANCES, DEFAULT_VALIDATION, ExperimentConfig)
from .reports import (LEDGER_VERSION, CheckResult, check, ValidationReport, RegressionLedger, write_manifest)
from .validation import (config_id, cmd_profile_report, cmd_density, cmd_validate, cmd_simulate, COMMANDS)
from .cli import (EXIT_PASS, EXIT_CHECK, EXIT_CONFIG, EXIT_GATE, EXIT_STATISTICS, EXIT_NUMERIC,
                  exit_code, parse_args, main)
