# Created on 2020/10/19

# This module is for validation reports, the regression ledger of certified
# constants and the column manifests written next to each output file.

# Standard library imports
from dataclasses import asdict, dataclass, replace
import json
import logging
import os
import time
from typing import Callable, Optional, Union

# Third party imports
import numpy as np
import pandas as pd

# Local application imports
from ..exceptions import ConfigurationError

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


LEDGER_VERSION = 1


@dataclass(frozen=True)
class CheckResult:
    """
    Outcome of one check.

    Attributes
    ----------
    name : str
      Name of the check, unique in a report.
    value : float or str
      Measured value.
    lower, upper : float, optional
      Bracket the value is compared with.
    passed : bool, optional
      None for informational entries.
    runtime : float
      Seconds spent, excluded from the JSON export.
    """
    name: str
    value: Union[float, str, None]
    lower: Optional[float] = None
    upper: Optional[float] = None
    passed: Optional[bool] = None
    runtime: float = 0.


def check(name, value, lower=None, upper=None, passed=None):
    """
    CheckResult whose pass flag is derived from the bracket when not given.
    """
    if isinstance(value, (float, int, np.floating, np.integer)):
        value = float(value)
    if passed is None and (lower is not None or upper is not None):
        passed = bool(np.isfinite(value)
                      and (lower is None or value >= lower)
                      and (upper is None or value <= upper))
    return CheckResult(name, value, None if lower is None else float(lower),
                       None if upper is None else float(upper), None if passed is None else bool(passed))


class ValidationReport:
    """
    Ordered collection of checks of one command.

    Attributes
    ----------
    command : str
      Command that produced the report.
    checks : list of CheckResult
    """

    def __init__(self, command, config_id=""):
        self.command = command
        self.config_id = config_id
        self.checks = []

    def __repr__(self):
        return "ValidationReport({}, {} checks, passed={})".format(self.command, len(self.checks), self.passed)

    def __len__(self):
        return len(self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self):
        return [c.name for c in self.checks]

    def add(self, result: CheckResult):
        """
        Appends a check.

        Raises
        ------
        ValueError
          When a check of the same name is already present.
        """
        if result.name in self.names():
            raise ValueError("Check {} appears twice in the report.".format(result.name))
        self.checks.append(result)
        level = logging.WARNING if result.passed is False else logging.INFO
        logger.log(level, "%s: %s = %s [%s, %s] %s", self.command, result.name, result.value,
                   result.lower, result.upper, {True: "pass", False: "FAIL", None: "info"}[result.passed])
        return result

    def run(self, name: str, fn: Callable, *args, **kwargs):
        """
        Times fn(*args, **kwargs), which returns a CheckResult or a list of them,
        and adds the results under `name` (suffixed by their own names for lists).
        """
        start = time.perf_counter()
        out = fn(*args, **kwargs)
        elapsed = time.perf_counter() - start
        results = out if isinstance(out, list) else [out]
        for r in results:
            label = name if len(results) == 1 else "{}.{}".format(name, r.name)
            self.add(replace(r, name=label, runtime=elapsed / len(results)))
        return out

    @property
    def passed(self):
        return all(c.passed is not False for c in self.checks)

    @property
    def failures(self):
        return [c.name for c in self.checks if c.passed is False]

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    # EXPORT

    def to_frame(self):
        return pd.DataFrame([asdict(c) for c in self.checks],
                            columns=['name', 'value', 'lower', 'upper', 'passed', 'runtime'])

    def to_dict(self):
        """Report without runtimes, so that equal inputs give equal documents."""
        checks = []
        for c in self.checks:
            entry = asdict(c)
            del entry['runtime']
            checks.append(entry)
        return {'command': self.command, 'config': self.config_id, 'passed': self.passed, 'checks': checks}

    def to_json(self, path):
        with open(path, 'w') as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def to_csv(self, path):
        """Writes the checks, runtimes included."""
        self.to_frame().to_csv(path, index=False, float_format='%.10g')


class RegressionLedger:
    """
    Versioned JSON file of certified brackets.

    A bracket is recorded the first time its key is measured; later runs compare
    with the recorded values and never rewrite them.

    Attributes
    ----------
    path : str
      File of the ledger.
    entries : dict
      Key -> {'lower', 'upper'}.
    """

    def __init__(self, path):
        self.path = path
        self.entries = {}
        self.certified = []
        if os.path.isfile(path):
            with open(path) as fh:
                content = json.load(fh)
            if content.get('version') != LEDGER_VERSION:
                raise ConfigurationError("Ledger {} has version {!r}, expected {}."
                                         .format(path, content.get('version'), LEDGER_VERSION))
            self.entries = dict(content.get('brackets', {}))

    def __contains__(self, key):
        return key in self.entries

    def bracket(self, key, lower, upper, slack=0.05):
        """
        Compares a measured bracket with the recorded one, certifying it when absent.

        Returns
        -------
        CheckResult
          Value is the largest relative excursion beyond the recorded bracket,
          compared with `slack`.
        """
        if key not in self.entries:
            self.entries[key] = {'lower': float(lower), 'upper': float(upper)}
            self.certified.append(key)
            logger.warning("Certified new bracket %s = [%.6g, %.6g] in %s", key, lower, upper, self.path)
        ref = self.entries[key]
        scale = lambda v: max(abs(v), 1e-300)
        excursion = max(0., (ref['lower'] - lower) / scale(ref['lower']),
                        (upper - ref['upper']) / scale(ref['upper']))
        return check(key, excursion, upper=slack)

    def save(self):
        """Writes the ledger when new brackets were certified."""
        if not self.certified:
            return
        folder = os.path.dirname(self.path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(self.path, 'w') as fh:
            json.dump({'version': LEDGER_VERSION, 'brackets': self.entries}, fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.certified = []


def write_manifest(folder, entries):
    """
    Writes manifest.json describing the columns of each file in `folder`.

    Parameters
    ----------
    entries : dict
      File name -> {'columns': [...], 'description': str}.
    """
    manifest = {'separator': ',', 'comment': '#', 'files': entries}
    with open(os.path.join(folder, "manifest.json"), 'w') as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
