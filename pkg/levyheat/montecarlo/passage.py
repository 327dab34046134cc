# Created on 2020/10/16

# This module is for exit and hitting statistics of balls, estimated on the
# jump skeleton of Euler paths.

# Standard library imports
from dataclasses import dataclass
import json
import logging
from numbers import Real
from typing import Optional, Sequence, Union

# Third party imports
import numpy as np
import pandas as pd
from statsmodels.api import OLS
from statsmodels.stats.proportion import proportion_confint
from typeguard import typechecked

# Local application imports
from ..exceptions import DomainError, StatisticsError
from ..frozen import FrozenKernelSpec
from ..parametrix import VariableKernelSpec
from ..quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .montecarlo import DEFAULT_SIM, EulerEngine, SimConfig, euler_times, jump_intensity

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


def required_paths(precision):
    """Paths for a standard error of at most `precision` on any probability."""
    return int(np.ceil(0.25 / precision ** 2))


def check_budget(cfg, precision):
    required = required_paths(precision)
    if cfg.paths < required:
        raise StatisticsError("{} paths give a standard error up to {:.3g}; at least {} are needed for {:.3g}."
                              .format(cfg.paths, 0.5 / np.sqrt(cfg.paths), required, precision),
                              required=required)


def _skeleton(x, drift, dt, path, u, z):
    """Positions just after each jump of the step, in path and time order."""
    order = np.lexsort((u, path))
    path, u, z = path[order], u[order], z[order]
    total = np.cumsum(z)
    first = np.searchsorted(path, path)
    before = np.where(first > 0, total[first - 1], 0.)
    return path, u, x[path] + drift[path] * u * dt + total - before


def _first_times(spec, x0, t, horizon, cfg, quad, leaves):
    """
    First time in (t, t + horizon] at which a skeleton position satisfies `leaves`,
    inf for paths that never do.
    """
    engine = EulerEngine(jump_intensity(spec), cfg, quad)
    times = euler_times(float(t), float(t) + float(horizon), cfg.euler_step)
    first = np.full(cfg.paths, np.inf)
    for lo, hi, rng in cfg.blocks():
        n = hi - lo
        x = np.full(n, float(x0))
        hit = np.full(n, np.inf)
        for a, b in zip(times[:-1], times[1:]):
            dt = b - a
            x_new, drift, path, u, z = engine.step(rng, x, a, dt)
            path, u, pos = _skeleton(x, drift, dt, path, u, z)
            inside = leaves(pos)
            np.minimum.at(hit, path[inside], a + u[inside] * dt)
            ends = leaves(x_new)
            hit[ends] = np.minimum(hit[ends], b)
            x = x_new
        first[lo:hi] = hit
    return first


@dataclass
class ExitTimeReport:
    """
    Estimates of P(tau_{B(x0, eps)} <= t + r) on a grid of r.

    Attributes
    ----------
    r : numpy.ndarray
      Grid of delays.
    probability, stderr : numpy.ndarray
      Point estimates and standard errors.
    ci_low, ci_high : numpy.ndarray
      Wilson 95% intervals.
    scale : float
      phi(eps).
    C0 : float
      Largest probability / (r / phi(eps)) over the grid.
    slope, slope_se : float
      Least-squares slope of the probabilities against r/phi(eps) through the origin.
    gamma0 : float
      1/(2 C0), the delay factor at which the linear envelope reaches 1/2.
    p_gamma, se_gamma : float
      Estimate and standard error at r = gamma0 phi(eps).
    """
    x0: float
    radius: float
    paths: int
    r: np.ndarray
    probability: np.ndarray
    stderr: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    scale: float
    C0: float
    slope: float
    slope_se: float
    gamma0: float
    p_gamma: float
    se_gamma: float

    @property
    def passed(self):
        return bool(np.isfinite(self.C0) and self.p_gamma <= 0.5 + 2. * self.se_gamma)

    def to_frame(self):
        return pd.DataFrame({'r': self.r, 'probability': self.probability, 'stderr': self.stderr,
                             'ci_low': self.ci_low, 'ci_high': self.ci_high,
                             'ratio': self.probability / (self.r / self.scale)})

    def to_dict(self):
        return {'x0': self.x0, 'radius': self.radius, 'paths': self.paths, 'C0': self.C0,
                'slope': self.slope, 'slope_se': self.slope_se, 'gamma0': self.gamma0,
                'p_gamma': self.p_gamma, 'se_gamma': self.se_gamma, 'passed': self.passed,
                'grid': self.to_frame().to_dict(orient='list')}

    def to_json(self, path):
        with open(path, 'w') as fh:
            json.dump(self.to_dict(), fh, indent=2)


@typechecked
def exit_time_stats(spec: Union[FrozenKernelSpec, VariableKernelSpec], x0: Real, radius: Real,
                    horizon: Optional[Real]=None, cfg: SimConfig=DEFAULT_SIM, t: Real=0.,
                    r_grid: Optional[Union[Sequence[float], np.ndarray]]=None, precision: Real=0.01,
                    quad: QuadratureConfig=DEFAULT_QUADRATURE) -> ExitTimeReport:
    """
    Estimates the distribution of the exit time from the ball B(x0, radius).

    Parameters
    ----------
    spec : FrozenKernelSpec or VariableKernelSpec
      Kernel (d=1).
    x0 : float
      Center of the ball and starting point.
    radius : float
      Radius eps of the ball.
    horizon : float, optional
      Largest delay simulated, 4 phi(eps) by default.
    r_grid : sequence of float, optional
      Delays where the probability is estimated, 16 equispaced values up to the horizon by default.
    precision : float
      Target standard error; fixes the smallest admissible number of paths.

    Raises
    ------
    StatisticsError
      When cfg.paths is below the budget required by `precision`.
    """

    # Checks
    if spec.profile.d != 1:
        raise DomainError("Exit statistics are implemented for d=1.")
    if not radius > 0:
        raise DomainError("The radius must be positive.")
    check_budget(cfg, precision)

    # Initializations
    scale = float(spec.profile.phi(float(radius)))
    horizon = 4. * scale if horizon is None else float(horizon)
    r = horizon * np.arange(1, 17) / 16. if r_grid is None else np.asarray(r_grid, dtype=float)
    if np.any(r <= 0) or np.any(r > horizon):
        raise DomainError("Delays must lie in (0, horizon].")

    first = _first_times(spec, x0, t, horizon, cfg, quad, lambda pos: np.abs(pos - x0) >= radius) - float(t)
    n = cfg.paths
    counts = np.array([np.sum(first <= ri) for ri in r])
    prob = counts / n
    stderr = np.sqrt(prob * (1. - prob) / n)
    low, high = proportion_confint(counts, n, alpha=0.05, method='wilson')

    x = r / scale
    C0 = float(np.max(prob / x))
    fit = OLS(prob, x).fit()
    gamma0 = 0.5 / C0 if C0 > 0 else np.inf
    r_gamma = min(gamma0 * scale, horizon)
    if gamma0 * scale > horizon:
        logger.warning("gamma0 phi(eps) = %.4g lies beyond the horizon %.4g; the estimate is truncated.",
                       gamma0 * scale, horizon)
    p_gamma = float(np.mean(first <= r_gamma))
    se_gamma = float(np.sqrt(p_gamma * (1. - p_gamma) / n))
    logger.info("Exit from B(%g, %g): C0=%.4g, gamma0=%.4g, P=%.4g +- %.2g", x0, radius, C0, gamma0,
                p_gamma, se_gamma)
    return ExitTimeReport(float(x0), float(radius), n, r, prob, stderr, np.asarray(low), np.asarray(high),
                          scale, C0, float(fit.params[0]), float(fit.bse[0]), float(gamma0), p_gamma, se_gamma)


@dataclass
class HittingReport:
    """
    Estimate of P(sigma_{B(y0, eps)} < t + gamma phi(eps)) and its lower envelope
    eps phi(eps) / (|x0 - y0| phi(|x0 - y0|)).
    """
    x0: float
    y0: float
    radius: float
    gamma: float
    paths: int
    probability: float
    stderr: float
    ci_low: float
    ci_high: float
    envelope: float

    @property
    def c1(self):
        """Fitted constant probability / envelope."""
        return self.probability / self.envelope

    @property
    def passed(self):
        return self.c1 > 0

    def to_dict(self):
        return {'x0': self.x0, 'y0': self.y0, 'radius': self.radius, 'gamma': self.gamma, 'paths': self.paths,
                'probability': self.probability, 'stderr': self.stderr, 'ci_low': self.ci_low,
                'ci_high': self.ci_high, 'envelope': self.envelope, 'c1': self.c1, 'passed': self.passed}


@typechecked
def hitting_prob_stats(spec: Union[FrozenKernelSpec, VariableKernelSpec], x0: Real, y0: Real, radius: Real,
                       gamma: Real=1., cfg: SimConfig=DEFAULT_SIM, t: Real=0., precision: Real=0.01,
                       quad: QuadratureConfig=DEFAULT_QUADRATURE) -> HittingReport:
    """
    Estimates the probability that a path started at x0 enters B(y0, radius) before
    t + gamma phi(radius).

    Raises
    ------
    DomainError
      When |x0 - y0| < 2 radius.
    StatisticsError
      When cfg.paths is below the budget required by `precision`.
    """
    if spec.profile.d != 1:
        raise DomainError("Hitting statistics are implemented for d=1.")
    distance = abs(float(y0) - float(x0))
    if not radius > 0 or distance < 2. * radius:
        raise DomainError("Hitting statistics require radius > 0 and |x0 - y0| >= 2 radius.")
    check_budget(cfg, precision)

    phi = spec.profile.phi
    scale = float(phi(float(radius)))
    first = _first_times(spec, x0, t, gamma * scale, cfg, quad, lambda pos: np.abs(pos - y0) < radius)
    n = cfg.paths
    count = int(np.sum(np.isfinite(first)))
    prob = count / n
    low, high = proportion_confint(count, n, alpha=0.05, method='wilson')
    envelope = radius * scale / (distance * float(phi(distance)))
    report = HittingReport(float(x0), float(y0), float(radius), float(gamma), n, prob,
                           float(np.sqrt(prob * (1. - prob) / n)), float(low), float(high), float(envelope))
    logger.info("Hitting B(%g, %g) from %g: P=%.4g +- %.2g, c1=%.4g", y0, radius, x0, prob, report.stderr,
                report.c1)
    return report


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
