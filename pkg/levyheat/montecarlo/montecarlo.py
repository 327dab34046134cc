# Created on 2020/10/14

# This module is for Monte Carlo sampling of the jump processes: exact sampling of
# the frozen (x-independent) process and an Euler scheme for variable kernels.

# Standard library imports
from dataclasses import dataclass
import json
import logging
from numbers import Real
from typing import Union

# Third party imports
import numpy as np
import pandas as pd
from scipy.interpolate import PchipInterpolator
from typeguard import typechecked

# Local application imports
from ..exceptions import ConfigurationError, DomainError, ModelError, NumericError
from ..frozen import FrozenKernelSpec, directions, drift_vector
from ..parametrix import VariableKernelSpec
from ..profiles import COMPENSATOR_FULL, COMPENSATOR_NONE, ScalingProfile
from ..quadrature import (DEFAULT_QUADRATURE, QuadratureConfig, integrate_to_infinity, integrate_to_zero,
                          is_divergent, quad_log)

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


@dataclass(frozen=True)
class SimConfig:
    """
    Settings of the Monte Carlo samplers.

    Attributes
    ----------
    small_jump_cutoff : float
      Jumps with |z| <= small_jump_cutoff are replaced by their mean (and variance).
    gaussian_correction : bool
      Whether the variance of the removed small jumps is added as a Gaussian.
    paths : int
      Number of paths.
    seed : int
      Root seed of the random streams.
    euler_step : float
      Time step of the Euler scheme.
    block_size : int
      Paths per random stream; each block draws from its own Philox generator.
    truncated : bool
      Adds the drift that turns the compensated process into the one with the
      truncated compensator (frozen sampler only).
    nodes_per_decade : int
      Resolution of the tables used to invert the radial tails.
    table_points : int
      Positions where the small-jump mean and variance of a variable kernel are tabulated.
    table_half_width : float
      Half width of that table; positions beyond use the edge values.
    """
    small_jump_cutoff: float = 0.05
    gaussian_correction: bool = True
    paths: int = 100000
    seed: int = 20201014
    euler_step: float = 1. / 64.
    block_size: int = 8192
    truncated: bool = False
    nodes_per_decade: int = 40
    table_points: int = 33
    table_half_width: float = 8.

    def __post_init__(self):
        if not 0 < self.small_jump_cutoff <= 1:
            raise ValueError("small_jump_cutoff must lie in (0, 1].")
        if self.paths < 1 or self.block_size < 1:
            raise ValueError("paths and block_size must be >= 1.")
        if not self.euler_step > 0:
            raise ValueError("euler_step must be positive.")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer.")
        if self.table_points < 2 or not self.table_half_width > 0:
            raise ValueError("The small-jump table needs >= 2 points and a positive width.")

    def blocks(self):
        """Yields (start, stop, generator) over the paths, one Philox stream per block."""
        n_blocks = -(-self.paths // self.block_size)
        streams = np.random.SeedSequence(self.seed).spawn(n_blocks)
        for k, seq in enumerate(streams):
            start = k * self.block_size
            yield start, min(start + self.block_size, self.paths), np.random.Generator(np.random.Philox(seq))


DEFAULT_SIM = SimConfig()


class JumpIntensity:
    """
    Jump intensity J(t,x,y) = kappa(t,x,y-x)/(|y-x|^d phi(|y-x|)) of a frozen or variable kernel.

    Attributes
    ----------
    profile : ScalingProfile
      Radial scale.
    kappa0 : float
      Bound of kappa, used as the thinning envelope.
    x_dependent, time_homogeneous : bool
      Properties of kappa.
    units, weights : numpy.ndarray
      Discretized directions and their weights.
    """

    def __init__(self, kappa, profile, kappa0, x_dependent, time_homogeneous, name="", n_angles=64):
        self._kappa = kappa
        self.profile = profile
        self.kappa0 = float(kappa0)
        self.x_dependent = bool(x_dependent)
        self.time_homogeneous = bool(time_homogeneous)
        self.name = name
        self.d = profile.d
        self.units, self.weights = directions(self.d, n_angles)

    @classmethod
    def from_frozen(cls, spec: FrozenKernelSpec):
        return cls(lambda t, x, z: spec(t, z), spec.profile, spec.kappa0, False, spec.time_homogeneous,
                   spec.name, spec.n_angles)

    @classmethod
    def from_variable(cls, spec: VariableKernelSpec):
        return cls(lambda t, x, z: spec(t, x, z[:, 0]), spec.profile, spec.kappa0, not spec.x_independent,
                   spec.time_homogeneous, spec.name)

    def kappa(self, t, x, z):
        """kappa(t, x_i, z_i) for x of shape (n,) and z of shape (n, d)."""
        z = np.asarray(z, dtype=float).reshape(-1, self.d)
        x = np.broadcast_to(np.asarray(x, dtype=float).reshape(-1), (z.shape[0],))
        return np.asarray(self._kappa(float(t), x, z), dtype=float).reshape(-1)

    def __call__(self, t, x, y):
        x = np.asarray(x, dtype=float).reshape(-1, self.d)
        z = np.asarray(y, dtype=float).reshape(-1, self.d) - x
        r = np.sqrt(np.sum(z * z, axis=1))
        return self.kappa(t, x[:, 0], z) / (r ** self.d * self.profile.phi(r))

    def radial(self, t, x):
        """Functions r -> kappa(t, x, r u_m) for each direction m."""
        def along(m):
            u = self.units[m]

            def g(r):
                r = np.asarray(r, dtype=float)
                z = r.reshape(-1, 1) * u[None, :]
                return self.kappa(t, np.full(z.shape[0], float(x)), z).reshape(r.shape)
            return g
        return along

    def large_jump_rate(self, t, x=0., quad: QuadratureConfig=DEFAULT_QUADRATURE):
        """Total rate int_{|z|>1} J(t, x, x+z) dz."""
        phi = self.profile.phi
        along = self.radial(t, x)
        total = 0.
        for m, weight in enumerate(self.weights):
            g = along(m)
            value = integrate_to_infinity(lambda r, g=g: float(g(r)) / (r * float(phi(r))), 1., quad, "jump rate")
            if is_divergent(value):
                raise NumericError("Large-jump rate diverges.")
            total += weight * value
        return float(total)


class RadialSampler:
    """
    Inverse of the radial tail T(r) = int_r^upper dr'/(r' phi(r')) on (lower, upper],
    by a monotone spline in log-log coordinates.

    Notes
    -----
      With upper = inf the tail beyond 1e8 lower is extrapolated as a power law
      with the exponent of the last table segment.
    """

    def __init__(self, profile: ScalingProfile, lower, upper=np.inf, per_decade=40,
                 quad: QuadratureConfig=DEFAULT_QUADRATURE):
        if not 0 < lower < upper:
            raise DomainError("RadialSampler requires 0 < lower < upper.")
        phi = profile.phi
        self.lower, self.upper = float(lower), float(upper)
        self.bounded = np.isfinite(upper)
        top = self.upper if self.bounded else 1e8 * self.lower
        n = max(int(per_decade * np.log10(top / self.lower)), 2) + 1
        r = np.logspace(np.log10(self.lower), np.log10(top), n)
        w = lambda s: 1. / (s * float(phi(s)))
        pieces = np.array([quad_log(w, a, b, quad) for a, b in zip(r[:-1], r[1:])])
        if self.bounded:
            self.remainder = 0.
        else:
            self.remainder = integrate_to_infinity(w, top, quad, "jump tail")
            if is_divergent(self.remainder):
                raise NumericError("Radial tail of profile {} diverges.".format(profile.name))
        tail = self.remainder + np.append(np.cumsum(pieces[::-1])[::-1], 0.)
        self.mass = float(tail[0])
        self.top = top
        if self.bounded:
            self._spline = PchipInterpolator(tail[::-1], np.log(r[::-1]))
        else:
            self._spline = PchipInterpolator(np.log(tail[::-1]), np.log(r[::-1]))
            self._exponent = float(np.log(tail[-2] / tail[-1]) / np.log(r[-1] / r[-2]))

    def sample(self, u):
        """Radii with tail T(r) = u mass, u in (0, 1]."""
        v = np.asarray(u, dtype=float) * self.mass
        if self.bounded:
            return np.exp(self._spline(v))
        out = np.empty_like(v)
        beyond = v < self.remainder
        out[~beyond] = np.exp(self._spline(np.log(v[~beyond])))
        out[beyond] = self.top * (self.remainder / v[beyond]) ** (1. / self._exponent)
        return out


def small_jump_moments(radial, profile: ScalingProfile, units, weights, cutoff,
                       quad: QuadratureConfig=DEFAULT_QUADRATURE):
    """
    Per unit time, the drift that replaces the compensator and the removed jumps
    below `cutoff`, and the covariance int_{|z|<=cutoff} z z^T nu(dz).

    Parameters
    ----------
    radial : callable
      m -> (r -> kappa(r u_m)).
    """
    phi, mode = profile.phi, profile.compensator_mode
    d = units.shape[1]
    drift, cov = np.zeros(d), np.zeros((d, d))
    for m, (u, weight) in enumerate(zip(units, weights)):
        g = radial(m)
        f = lambda r, g=g: float(g(r)) / float(phi(r))
        if mode == COMPENSATOR_NONE:
            mean = integrate_to_zero(f, cutoff, quad, "small-jump mean")
        else:
            mean = -quad_log(f, cutoff, 1., quad) if cutoff < 1 else 0.
            if mode == COMPENSATOR_FULL:
                far = integrate_to_infinity(f, 1., quad, "compensator tail")
                mean = far if is_divergent(far) else mean - far
        var = integrate_to_zero(lambda r, g=g: r * float(g(r)) / float(phi(r)), cutoff, quad, "small-jump variance")
        if is_divergent(mean) or is_divergent(var):
            raise NumericError("Small-jump moments diverge along direction {}.".format(u.tolist()))
        drift += weight * mean * u
        cov += weight * var * np.outer(u, u)
    return drift, cov


def _root(cov):
    vals, vecs = np.linalg.eigh(cov)
    return vecs * np.sqrt(np.clip(vals, 0., None))[None, :]


class _Bands:
    """Proposal measures kappa0/(r phi(r)) dr on (cutoff, 1] and (1, inf)."""

    def __init__(self, jump, cfg, quad):
        edges = [(cfg.small_jump_cutoff, 1.)] if cfg.small_jump_cutoff < 1 else []
        edges.append((1., np.inf))
        self.samplers = [RadialSampler(jump.profile, a, b, cfg.nodes_per_decade, quad) for a, b in edges]
        self.jump = jump
        self.probs = jump.weights / jump.weights.sum()
        self.rates = [jump.kappa0 * float(jump.weights.sum()) * s.mass for s in self.samplers]

    def draw(self, rng, x, duration, kappa):
        """
        Accepted jumps of the paths started at x over a window of length `duration`.

        Returns
        -------
        path : indices of the paths, u : jump times as fractions of the window, z : jumps (k, d)
        """
        n = x.shape[0]
        paths, times, jumps = [], [], []
        for sampler, rate in zip(self.samplers, self.rates):
            counts = rng.poisson(rate * duration, n)
            total = int(counts.sum())
            path = np.repeat(np.arange(n), counts)
            u = rng.random(total)
            m = rng.choice(self.probs.size, size=total, p=self.probs)
            r = sampler.sample(1. - rng.random(total))
            z = r[:, None] * self.jump.units[m]
            accept = rng.random(total)
            k = kappa(x[path], z)
            ratio = k / self.jump.kappa0
            if np.any(~np.isfinite(ratio)) or np.any(ratio < 0) or np.any(ratio > 1. + 1e-9):
                raise ModelError("Thinning of {} is degenerate: kappa/kappa0 reaches [{:.4g}, {:.4g}]."
                                 .format(self.jump.name, float(np.min(ratio)), float(np.max(ratio))))
            keep = accept < ratio
            paths.append(path[keep])
            times.append(u[keep])
            jumps.append(z[keep])
        return np.concatenate(paths), np.concatenate(times), np.concatenate(jumps)


def _sum_by_path(path, z, n):
    return np.column_stack([np.bincount(path, weights=z[:, k], minlength=n) for k in range(z.shape[1])])


class SampleSet:
    """
    Endpoints X_s of paths started at x0 at time t.

    Attributes
    ----------
    values : numpy.ndarray
      Endpoints, shape (n, d).
    """

    def __init__(self, values, t, s, x0, kernel_id="", config=None):
        self.values = np.asarray(values, dtype=float)
        self.t, self.s = float(t), float(s)
        self.x0 = np.asarray(x0, dtype=float).reshape(-1)
        self.kernel_id = kernel_id
        self.config = config

    def __repr__(self):
        return "SampleSet(n={}, d={}, t={:g}, s={:g})".format(self.n, self.d, self.t, self.s)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def d(self):
        return self.values.shape[1]

    @property
    def increments(self):
        return self.values - self.x0[None, :]

    def mean(self):
        return self.values.mean(axis=0)

    def std(self):
        return self.values.std(axis=0, ddof=1)

    def to_frame(self):
        columns = ['x'] if self.d == 1 else ['x{}'.format(k + 1) for k in range(self.d)]
        return pd.DataFrame(self.values, columns=columns)

    def to_csv(self, path):
        """Writes the endpoints to CSV after '# key=value' lines."""
        meta = {'t': self.t, 's': self.s, 'x0': self.x0.tolist(), 'kernel': self.kernel_id, 'n': self.n}
        if self.config is not None:
            meta.update({'seed': self.config.seed, 'cutoff': self.config.small_jump_cutoff,
                         'gaussian_correction': self.config.gaussian_correction})
        with open(path, 'w') as fh:
            for key, value in meta.items():
                fh.write("# {}={}\n".format(key, value))
            self.to_frame().to_csv(fh, index=False, float_format='%.17g')

    @classmethod
    def from_csv(cls, path):
        """Reads the endpoints and the t, s, x0 and kernel lines of a file written by `to_csv`."""
        meta = {}
        with open(path) as fh:
            for line in fh:
                if not line.startswith('#'):
                    break
                key, _, value = line[1:].strip().partition('=')
                meta[key] = value
        frame = pd.read_csv(path, comment='#', float_precision='round_trip')
        return cls(frame.to_numpy(dtype=float), float(meta['t']), float(meta['s']),
                   json.loads(meta['x0']), kernel_id=meta.get('kernel', ''))


# SAMPLERS

@typechecked
def simulate_frozen(spec: FrozenKernelSpec, t: Real, s: Real, cfg: SimConfig=DEFAULT_SIM, x0=0.,
                    quad: QuadratureConfig=DEFAULT_QUADRATURE) -> SampleSet:
    """
    Samples X_s - X_t of the process with the frozen kernel.

    Parameters
    ----------
    spec : FrozenKernelSpec
      Kernel.
    t, s : float
      Window, t < s.
    cfg : SimConfig
      Settings.
    x0 : float or array_like
      Starting point.

    Returns
    -------
    SampleSet

    Raises
    ------
    ModelError
      When kappa leaves [0, kappa0] during thinning.

    Notes
    -----
      Jumps above the cutoff are proposed from kappa0/(|z|^d phi(|z|)) and thinned
      against the time average of kappa over [t, s], which gives the law of the
      endpoint exactly. Smaller jumps are replaced by their compensated mean and,
      optionally, a Gaussian with their covariance.
    """
    if not s > t:
        raise DomainError("simulate_frozen requires t < s.")
    duration = float(s) - float(t)
    jump = JumpIntensity.from_frozen(spec)
    kbar = spec.averaged(t, s)
    bands = _Bands(jump, cfg, quad)
    drift, cov = small_jump_moments(kbar.along, spec.profile, spec.units, spec.weights,
                                    cfg.small_jump_cutoff, quad)
    shift = duration * drift
    if cfg.truncated:
        shift = shift + drift_vector(spec, t, s, quad)
    root = _root(duration * cov)
    start = np.asarray(x0, dtype=float).reshape(spec.d)

    out = np.empty((cfg.paths, spec.d))
    for lo, hi, rng in cfg.blocks():
        n = hi - lo
        path, _, z = bands.draw(rng, np.zeros(n), duration, lambda x, z: kbar(z))
        values = start[None, :] + shift[None, :] + _sum_by_path(path, z, n)
        if cfg.gaussian_correction:
            values += rng.standard_normal((n, spec.d)) @ root.T
        out[lo:hi] = values
    logger.info("Sampled %d endpoints of %s on [%g, %g] (proposal rates %s)", cfg.paths, spec.name, t, s,
                np.round(bands.rates, 6).tolist())
    return SampleSet(out, t, s, start, spec.name, cfg)


class EulerEngine:
    """
    One Euler step of a jump process: kappa frozen at the start of the step, in time
    and at the current position of each path.
    """

    def __init__(self, jump: JumpIntensity, cfg: SimConfig=DEFAULT_SIM, quad: QuadratureConfig=DEFAULT_QUADRATURE):
        if jump.d != 1:
            raise DomainError("The Euler scheme is implemented for d=1.")
        self.jump = jump
        self.cfg = cfg
        self.quad = quad
        self.bands = _Bands(jump, cfg, quad)
        if jump.x_dependent:
            self.nodes = np.linspace(-cfg.table_half_width, cfg.table_half_width, cfg.table_points)
        else:
            self.nodes = np.zeros(1)
        self._tables = {}

    def moments(self, time):
        """Small-jump drift and variance per unit time on the table nodes."""
        key = None if self.jump.time_homogeneous else float(time)
        if key not in self._tables:
            drift, var = np.empty(self.nodes.size), np.empty(self.nodes.size)
            for i, x in enumerate(self.nodes):
                b, c = small_jump_moments(self.jump.radial(time, x), self.jump.profile, self.jump.units,
                                          self.jump.weights, self.cfg.small_jump_cutoff, self.quad)
                drift[i], var[i] = b[0], c[0, 0]
            self._tables[key] = (drift, var)
        return self._tables[key]

    def coefficients(self, time, x):
        drift, var = self.moments(time)
        if self.nodes.size == 1:
            return np.full(x.shape, drift[0]), np.full(x.shape, var[0])
        return np.interp(x, self.nodes, drift), np.interp(x, self.nodes, var)

    def step(self, rng, x, time, dt):
        """
        Advances the positions x over [time, time + dt].

        Returns
        -------
        x_new, drift, path, u, z
          New positions, drift per unit time of each path, and the accepted jumps
          (path index, fraction of the step, size).
        """
        n = x.shape[0]
        kappa = lambda xs, z: self.jump.kappa(time, xs, z)
        path, u, z = self.bands.draw(rng, x, dt, kappa)
        b, v = self.coefficients(time, x)
        x_new = x + b * dt + np.bincount(path, weights=z[:, 0], minlength=n)
        if self.cfg.gaussian_correction:
            x_new = x_new + np.sqrt(v * dt) * rng.standard_normal(n)
        return x_new, b, path, u, z[:, 0]


def euler_times(t, s, h):
    """Step times of the Euler scheme with steps of at most h."""
    steps = max(int(np.ceil((s - t) / h - 1e-12)), 1)
    return np.linspace(t, s, steps + 1)


@typechecked
def simulate_variable_euler(spec: VariableKernelSpec, t: Real, s: Real, cfg: SimConfig=DEFAULT_SIM, x0: Real=0.,
                            quad: QuadratureConfig=DEFAULT_QUADRATURE) -> SampleSet:
    """
    Samples X_s of the process with a variable kernel by an Euler scheme of step cfg.euler_step.

    Raises
    ------
    ConfigurationError
      When the step exceeds (s - t)/8.

    Notes
    -----
      A kernel that does not depend on x is sampled exactly by `simulate_frozen`,
      with the same random streams.
    """
    if not s > t:
        raise DomainError("simulate_variable_euler requires t < s.")
    if cfg.euler_step > (s - t) / 8.:
        raise ConfigurationError("Euler step {:g} exceeds (s-t)/8 = {:g}.".format(cfg.euler_step, (s - t) / 8.))
    if spec.x_independent:
        frozen = simulate_frozen(spec.frozen_at(x0), t, s, cfg, x0, quad)
        return SampleSet(frozen.values, t, s, x0, spec.name, cfg)

    engine = EulerEngine(JumpIntensity.from_variable(spec), cfg, quad)
    times = euler_times(float(t), float(s), cfg.euler_step)
    out = np.empty((cfg.paths, 1))
    for lo, hi, rng in cfg.blocks():
        x = np.full(hi - lo, float(x0))
        for a, b in zip(times[:-1], times[1:]):
            x = engine.step(rng, x, a, b - a)[0]
        out[lo:hi, 0] = x
    logger.info("Euler scheme for %s on [%g, %g]: %d paths, %d steps", spec.name, t, s, cfg.paths, times.size - 1)
    return SampleSet(out, t, s, x0, spec.name, cfg)


def jump_intensity(spec: Union[FrozenKernelSpec, VariableKernelSpec]) -> JumpIntensity:
    if isinstance(spec, VariableKernelSpec):
        return JumpIntensity.from_variable(spec)
    return JumpIntensity.from_frozen(spec)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
