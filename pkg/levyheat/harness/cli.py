# Created on 2020/10/20

# This module is for the command line interface: `levyheat <command> --config file.json`.

# Standard library imports
import argparse
import logging
import sys
from typing import List, Optional

# Third party imports
# /

# Local application imports
from ..exceptions import (ConfigurationError, DivergenceError, DomainError, HypothesisGateError,
                          IndeterminateError, LevyHeatError, ModelError, NumericError, StatisticsError)
from .config import ExperimentConfig
from .validation import COMMANDS

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


EXIT_PASS = 0
EXIT_CHECK = 1
EXIT_CONFIG = 2
EXIT_GATE = 3
EXIT_STATISTICS = 4
EXIT_NUMERIC = 5

# Checked in order, subclasses first.
EXIT_CODES = [
    (HypothesisGateError, EXIT_GATE),
    (StatisticsError, EXIT_STATISTICS),
    (NumericError, EXIT_NUMERIC),
    (DivergenceError, EXIT_NUMERIC),
    (IndeterminateError, EXIT_NUMERIC),
    (ConfigurationError, EXIT_CONFIG),
    (ModelError, EXIT_CONFIG),
    (DomainError, EXIT_CONFIG),
]


def exit_code(error: Exception) -> int:
    """Exit code of an exception raised by a command."""
    for cls, code in EXIT_CODES:
        if isinstance(error, cls):
            return code
    return EXIT_CONFIG


def parse_args(argv: Optional[List[str]]=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="levyheat",
                                     description="Heat kernels of nonlocal operators with jump intensities.")
    parser.add_argument("command", choices=sorted(COMMANDS), help="Command to run.")
    parser.add_argument("--config", required=True, help="JSON experiment configuration.")
    parser.add_argument("--out", default=None, help="Output directory (config: output).")
    parser.add_argument("--seed", type=int, default=None, help="Seed of the random streams (config: seed).")
    parser.add_argument("--tol-mass", type=float, default=None,
                        help="Accepted deviation of masses from 1 (config: tolerances.mass).")
    parser.add_argument("--tol-ck", type=float, default=None,
                        help="Accepted Chapman-Kolmogorov residual (config: tolerances.ck).")
    parser.add_argument("--grid-n", type=int, default=None,
                        help="Grid size, a power of two (config: grid.n and parametrix.n_x).")
    parser.add_argument("--paths", type=int, default=None, help="Monte Carlo paths (config: simulation.paths).")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Log progress at DEBUG level.")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Log warnings and errors only.")
    return parser.parse_args(argv)


def _configure_logging(args):
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


def main(argv: Optional[List[str]]=None) -> int:
    """
    Runs a command and returns its exit code:
    0 pass, 1 check failure, 2 configuration error, 3 hypothesis gate,
    4 statistics budget, 5 numerical failure.
    """
    args = parse_args(argv)
    _configure_logging(args)
    try:
        config = ExperimentConfig.from_json(args.config).with_overrides(
            out=args.out, seed=args.seed, tol_mass=args.tol_mass, tol_ck=args.tol_ck,
            grid_n=args.grid_n, paths=args.paths)
        report = COMMANDS[args.command](config)
    except LevyHeatError as err:
        code = exit_code(err)
        logger.error("%s failed (exit code %d): %s", args.command, code, err)
        return code
    if not report.passed:
        logger.error("%s: failed checks %s", args.command, ", ".join(report.failures))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
