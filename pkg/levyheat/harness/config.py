# Created on 2020/10/19

# This module is for the configuration of experiments: a single JSON document
# describing profile, modulus, kernel, numerical settings and checks.

# Standard library imports
from dataclasses import dataclass, field, fields
import json
import logging
import os
from typing import List, Optional

# Third party imports
from typeguard import typechecked

# Local application imports
from ..exceptions import ConfigurationError
from ..frozen import GridConfig, kernel_from_config
from ..moduli import Modulus, modulus_from_config
from ..montecarlo import SimConfig
from ..parametrix import ParametrixConfig, variable_kernel_from_config
from ..profiles import ScalingProfile, profile_from_config

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


FROZEN = 'frozen'
VARIABLE = 'variable'

DEFAULT_TOLERANCES = {
    'mass': 1e-3,
    'ck': 1e-3,
    'contraction': 0.5,
    'drift': 0.1,
    'order': 1.9,
    'doubling': 0.05,
    'scaling_power': 1e-8,
    'scaling_general': 1e-5,
    'duhamel': 1e-2,
}

DEFAULT_VALIDATION = {
    'mass': True,
    'two_sided': True,
    'scaling': True,
    'gradient': True,
    'fractional': True,
    'dependence': True,
    'ck': True,
    'contraction': True,
    'duhamel': False,
    'holder': False,
    'near_diagonal': False,
    'ks': True,
    'cf': True,
    'passage': False,
    'gaussian': False,
}


def _merged(defaults, given, what):
    unknown = set(given) - set(defaults)
    if unknown:
        raise ConfigurationError("Unknown {} keys: {}.".format(what, sorted(unknown)))
    out = dict(defaults)
    out.update(given)
    return out


def _built(cls, params, what):
    try:
        return cls(**params)
    except (TypeError, ValueError) as err:
        raise ConfigurationError("Invalid {} settings: {}".format(what, err))


@dataclass
class ExperimentConfig:
    """
    Configuration of an experiment.

    Attributes
    ----------
    profile : dict
      {family, params, d, name} of the scaling profile.
    modulus : dict
      {family, params, name} of the continuity modulus.
    kernel : dict
      {kind: 'frozen' or 'variable', name, params}.
    windows : list of [t, s]
      Time windows, the first one being used by checks.
    slices : list of float
      Starting points x0 of the exported rows of variable kernels.
    grid, parametrix, simulation : dict
      Keyword arguments of GridConfig, ParametrixConfig and SimConfig.
    tolerances : dict
      Accepted errors of the checks.
    validation : dict
      Enabled checks.
    passage : dict
      {x0, y0, radius, gamma} of the exit and hitting statistics.
    output : str
      Output directory.
    seed : int
      Seed of the random streams.
    ledger : str, optional
      Regression ledger file, 'ledger.json' in the output directory by default.
    precision : float
      Target standard error of Monte Carlo probabilities.
    """
    profile: dict
    kernel: dict
    modulus: dict = field(default_factory=lambda: {'family': 'power', 'params': {'eta': 0.5}})
    windows: List[List[float]] = field(default_factory=lambda: [[0., 1.]])
    slices: List[float] = field(default_factory=lambda: [0.])
    grid: dict = field(default_factory=dict)
    parametrix: dict = field(default_factory=dict)
    simulation: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    validation: dict = field(default_factory=dict)
    passage: dict = field(default_factory=dict)
    output: str = "out"
    seed: int = 20201014
    ledger: Optional[str] = None
    precision: float = 0.01

    def __post_init__(self):
        self.tolerances = _merged(DEFAULT_TOLERANCES, self.tolerances, "tolerance")
        self.validation = _merged(DEFAULT_VALIDATION, self.validation, "validation")
        self.kernel = dict(self.kernel)
        self.kernel.setdefault('kind', FROZEN)
        self.check()

    # CHECKS

    def check(self):
        """
        Raises ConfigurationError when a field is inconsistent.
        """
        if self.kernel['kind'] not in (FROZEN, VARIABLE):
            raise ConfigurationError("Kernel kind must be {!r} or {!r}.".format(FROZEN, VARIABLE))
        if 'name' not in self.kernel:
            raise ConfigurationError("The kernel needs a name.")
        if 'family' not in self.profile:
            raise ConfigurationError("The profile needs a family.")
        for key, value in self.tolerances.items():
            if not (isinstance(value, (int, float)) and value > 0):
                raise ConfigurationError("Tolerance {} must be positive, got {!r}.".format(key, value))
        if not self.windows:
            raise ConfigurationError("At least one time window is required.")
        for window in self.windows:
            if len(window) != 2 or not (0 <= window[0] < window[1]):
                raise ConfigurationError("Windows must be pairs [t, s] with 0 <= t < s, got {!r}.".format(window))
        if not self.precision > 0:
            raise ConfigurationError("precision must be positive.")

    # LOADING AND SAVING

    @classmethod
    def from_dict(cls, config: dict):
        """
        Builds a configuration from a dictionary; unknown keys are rejected.

        Raises
        ------
        ConfigurationError
          When the dictionary is empty, has unknown keys or lacks profile or kernel.
        """
        if not config:
            raise ConfigurationError("Empty configuration.")
        names = {f.name for f in fields(cls)}
        unknown = set(config) - names
        if unknown:
            raise ConfigurationError("Unknown configuration keys: {}.".format(sorted(unknown)))
        for key in ('profile', 'kernel'):
            if key not in config:
                raise ConfigurationError("Missing configuration key {!r}.".format(key))
        return cls(**config)

    @classmethod
    def from_json(cls, path: str):
        """Reads a configuration file."""
        if not os.path.isfile(path):
            raise ConfigurationError("Configuration file {} does not exist.".format(path))
        with open(path) as fh:
            text = fh.read()
        if not text.strip():
            raise ConfigurationError("Empty configuration file {}.".format(path))
        try:
            config = json.loads(text)
        except ValueError as err:
            raise ConfigurationError("Cannot parse {}: {}".format(path, err))
        if not isinstance(config, dict):
            raise ConfigurationError("The configuration must be a JSON object.")
        return cls.from_dict(config)

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_json(self, path):
        with open(path, 'w') as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)

    def with_overrides(self, out=None, seed=None, tol_mass=None, tol_ck=None, grid_n=None, paths=None):
        """
        New configuration where the given command-line values replace the file values.
        """
        config = json.loads(json.dumps(self.to_dict()))
        if out is not None:
            config['output'] = out
        if seed is not None:
            config['seed'] = int(seed)
        if tol_mass is not None:
            config['tolerances']['mass'] = float(tol_mass)
        if tol_ck is not None:
            config['tolerances']['ck'] = float(tol_ck)
        if grid_n is not None:
            config['grid']['n'] = int(grid_n)
            config['parametrix']['n_x'] = int(grid_n)
        if paths is not None:
            config['simulation']['paths'] = int(paths)
        return ExperimentConfig.from_dict(config)

    # BUILDERS

    @property
    def kind(self):
        return self.kernel['kind']

    @property
    def window(self):
        t, s = self.windows[0]
        return float(t), float(s)

    @property
    def ledger_path(self):
        return self.ledger if self.ledger else os.path.join(self.output, "ledger.json")

    def build_profile(self) -> ScalingProfile:
        return profile_from_config(self.profile)

    def build_modulus(self) -> Modulus:
        return modulus_from_config(self.modulus)

    @typechecked
    def build_kernel(self, profile: Optional[ScalingProfile]=None, gate: bool=True):
        """
        Builds the kernel; variable kernels check their integrability hypothesis
        unless `gate` is False.

        Returns
        -------
        FrozenKernelSpec or VariableKernelSpec
        """
        profile = self.build_profile() if profile is None else profile
        spec = {k: v for k, v in self.kernel.items() if k != 'kind'}
        if self.kind == FROZEN:
            return kernel_from_config(spec, profile)
        spec.setdefault('modulus', self.modulus)
        return variable_kernel_from_config(spec, profile, gate)

    def grid_config(self) -> GridConfig:
        params = dict(self.grid)
        params.setdefault('mass_tol', self.tolerances['mass'])
        return _built(GridConfig, params, "grid")

    def parametrix_config(self) -> ParametrixConfig:
        params = dict(self.parametrix)
        params.setdefault('mass_tol', self.tolerances['mass'])
        params.setdefault('ck_tol', self.tolerances['ck'])
        return _built(ParametrixConfig, params, "parametrix")

    def sim_config(self) -> SimConfig:
        params = dict(self.simulation)
        params['seed'] = int(self.seed)
        return _built(SimConfig, params, "simulation")

    def passage_settings(self):
        """Exit and hitting settings completed with defaults; y0 defaults to x0 + 4 radius."""
        settings = {'x0': 0., 'radius': 0.25, 'y0': None, 'gamma': 1.}
        unknown = set(self.passage) - set(settings)
        if unknown:
            raise ConfigurationError("Unknown passage keys: {}.".format(sorted(unknown)))
        settings.update(self.passage)
        if settings['y0'] is None:
            settings['y0'] = settings['x0'] + 4. * settings['radius']
        if not settings['radius'] > 0:
            raise ConfigurationError("The passage radius must be positive.")
        return settings


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
