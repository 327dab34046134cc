# Created on 2020/9/2

# This module is for graded quadrature over decades and the detection of divergent integrals.

# Standard library imports
from dataclasses import dataclass
import logging
from numbers import Real
from typing import Callable, List, Optional, Sequence, Union

# Third party imports
import numpy as np
from scipy import integrate
from typeguard import typechecked

# Local application imports
from ..exceptions import IndeterminateError, NumericError

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Tolerances and thresholds of the graded quadrature.

    Attributes
    ----------
    epsabs, epsrel : float
      Absolute and relative tolerances handed to scipy.integrate.quad on each piece.
    limit : int
      Maximum number of subintervals of a single quad call.
    growth_factor : float
      Per-decade growth of partial integrals regarded as divergence.
    growth_decades : int
      Number of consecutive decades the growth must persist.
    ceiling : float
      Partial integrals beyond this value are declared divergent.
    min_decades, max_decades : int
      Decades integrated before judging, and at most.
    stable_rtol : float
      Relative size of the last increment below which a series has stabilized.
    ratio_rtol : float
      Spread of successive increment ratios accepted as exactly geometric.
    divergent_power, convergent_power : float
      Exponents of polynomial decay of the increments (in the decade number)
      classified as divergent and convergent.
    fail_factor : float
      Factor between the error estimate of quad and the requested tolerance
      above which a piece is rejected.
    """

    epsabs: float = 1e-15
    epsrel: float = 1e-11
    limit: int = 200
    growth_factor: float = 1.05
    growth_decades: int = 3
    ceiling: float = 1e12
    min_decades: int = 6
    max_decades: int = 40
    stable_rtol: float = 1e-13
    ratio_rtol: float = 1e-8
    divergent_power: float = 1.1
    convergent_power: float = 1.5
    fail_factor: float = 1e6


DEFAULT_QUADRATURE = QuadratureConfig()


class Divergent:
    """
    Value returned in place of a number when a defining integral diverges.

    Attributes
    ----------
    quantity : str
      Name of the diverging quantity.
    partial : float
      Last partial integral computed before the verdict.
    increments : tuple of float
      Per-decade increments that led to the verdict.
    reason : str
      Rule that fired ('ceiling', 'growth', 'polynomial', 'increasing', 'sup').
    """

    def __init__(self, quantity="", partial=np.inf, increments=(), reason=""):
        self.quantity = quantity
        self.partial = float(partial)
        self.increments = tuple(float(x) for x in increments)
        self.reason = reason

    def __repr__(self):
        return "Divergent({!r}, partial={:.6g}, reason={!r})".format(self.quantity, self.partial, self.reason)

    def __eq__(self, other):
        return isinstance(other, Divergent)

    def __hash__(self):
        return hash("Divergent")


def is_divergent(value) -> bool:
    """Tells whether a quantity is the `Divergent` marker."""
    return isinstance(value, Divergent)


@dataclass
class SeriesVerdict:
    status: str
    value: float
    tail: float = 0.
    rule: str = ""


# PIECEWISE QUADRATURE

def _checked_quad(g, a, b, cfg, points=None, label=""):
    res = integrate.quad(g, a, b, epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit,
                         points=points, full_output=1)
    value, error = float(res[0]), float(res[1])
    if not np.isfinite(value):
        raise NumericError("Non-finite quadrature result on [{}, {}] {}.".format(a, b, label),
                           diagnostics={'a': a, 'b': b, 'value': value})
    if len(res) > 3:
        tol = max(cfg.epsabs, cfg.epsrel * abs(value))
        if error > cfg.fail_factor * tol:
            raise NumericError("Quadrature did not converge on [{}, {}] {}: {}".format(a, b, label, res[3]),
                               diagnostics={'a': a, 'b': b, 'value': value, 'error': error})
        logger.debug("quad flagged [%g, %g] %s with error %.3g", a, b, label, error)
    return value


@typechecked
def quad_log(f: Callable, a: Real, b: Real, cfg: QuadratureConfig=DEFAULT_QUADRATURE,
             points: Optional[Union[Sequence[float], np.ndarray]]=None) -> float:
    """
    Integrates f over [a, b], 0 < a < b < inf, in the variable u = log r.

    Notes
    -----
      Integrands of the package behave like powers times slowly varying
      functions, which are smooth in log r.
    """
    if not (0 < a < b < np.inf):
        raise ValueError("quad_log requires 0 < a < b < inf.")

    def g(u):
        r = np.exp(u)
        return float(f(r)) * r

    pts = None
    if points is not None:
        pts = [np.log(p) for p in points if a < p < b] or None
    return _checked_quad(g, np.log(a), np.log(b), cfg, points=pts, label="(log variable)")


@typechecked
def quad_linear(f: Callable, a: Real, b: Real, cfg: QuadratureConfig=DEFAULT_QUADRATURE,
                points: Optional[Union[Sequence[float], np.ndarray]]=None) -> float:
    """Integrates f over the finite interval [a, b]."""
    pts = None
    if points is not None:
        pts = [p for p in points if a < p < b] or None
    return _checked_quad(lambda x: float(f(x)), a, b, cfg, points=pts)


# SERIES ASSESSMENT

def assess_series(increments: Sequence[float], positions: Sequence[float],
                  cfg: QuadratureConfig=DEFAULT_QUADRATURE, final: bool=False) -> SeriesVerdict:
    """
    Judges a series of per-decade increments of a partial integral.

    Parameters
    ----------
    increments : sequence of float
      Integral over each successive decade, moving toward the singular end.
    positions : sequence of float
      Absolute decade number of each increment (|log10 r| at the midpoint, at least 0.5).
    cfg : QuadratureConfig
      Thresholds.
    final : bool
      True when no more decades will be computed.

    Returns
    -------
    SeriesVerdict
      With status 'converged', 'divergent' or 'pending'.
    """

    inc = np.asarray(increments, dtype=float)
    pos = np.asarray(positions, dtype=float)
    total = float(np.sum(inc))
    n = inc.size

    if not np.isfinite(total) or abs(total) > cfg.ceiling:
        return SeriesVerdict('divergent', total, rule='ceiling')
    if n < cfg.min_decades:
        return SeriesVerdict('pending', total)

    a = np.abs(inc)
    scale = max(abs(total), float(np.max(a)), np.finfo(float).tiny)

    # Stabilized
    if a[-1] <= cfg.stable_rtol * scale and a[-2] <= 10 * cfg.stable_rtol * scale:
        return SeriesVerdict('converged', total, rule='stable')

    last = a[-4:]
    same_sign = np.all(np.sign(inc[-4:]) == np.sign(inc[-1]))
    if not (np.all(last > 0) and same_sign):
        if final:
            raise IndeterminateError("Oscillating partial integrals.",
                                     diagnostics={'increments': inc.tolist()})
        return SeriesVerdict('pending', total)

    ratios = last[1:] / last[:-1]
    rho = float(ratios[-1])

    # Exactly geometric decay
    if np.all(ratios < 0.95) and np.ptp(ratios) <= cfg.ratio_rtol * rho:
        tail = inc[-1] * rho / (1. - rho)
        return SeriesVerdict('converged', total + tail, tail, rule='geometric')

    # Persistent growth of the partial integrals
    partial = np.cumsum(inc)
    m = cfg.growth_decades
    if n > m and np.all(partial[-m-1:-1] != 0):
        growth = partial[-m:] / partial[-m-1:-1]
        if np.all(ratios >= 0.95) and np.all(growth >= cfg.growth_factor):
            return SeriesVerdict('divergent', total, rule='growth')
    if np.all(ratios > 1.):
        return SeriesVerdict('divergent', total, rule='increasing')

    # Polynomial decay in the decade number
    k = min(6, n)
    if np.all(a[-k:] > 0):
        p = -np.polyfit(np.log(pos[-k:]), np.log(a[-k:]), 1)[0]
        if p <= cfg.divergent_power and np.all(ratios >= 0.8):
            return SeriesVerdict('divergent', total, rule='polynomial')
        if p >= cfg.convergent_power and rho >= 0.8 and n >= 2 * cfg.min_decades:
            tail = inc[-1] * pos[-1] / (p - 1.)
            return SeriesVerdict('converged', total + tail, tail, rule='polynomial')

    if final:
        if np.all(ratios < 0.95):
            tail = inc[-1] * rho / (1. - rho)
            logger.warning("Geometric tail extrapolated after %d decades (ratio %.4f).", n, rho)
            return SeriesVerdict('converged', total + tail, tail, rule='extrapolated')
        raise IndeterminateError("Partial integrals neither stabilize nor grow beyond threshold.",
                                 diagnostics={'increments': inc.tolist(), 'positions': pos.tolist(),
                                              'partial': total})
    return SeriesVerdict('pending', total)


# INTEGRALS TOWARD SINGULAR ENDS

def _decade_integral(f, start, direction, cfg, quantity, points):
    increments: List[float] = []
    positions: List[float] = []
    edge = float(start)
    for k in range(cfg.max_decades):
        other = edge / 10. if direction < 0 else edge * 10.
        lo, hi = min(edge, other), max(edge, other)
        increments.append(quad_log(f, lo, hi, cfg, points=points))
        positions.append(max(abs(np.log10(np.sqrt(lo * hi))), 0.5))
        edge = other
        verdict = assess_series(increments, positions, cfg, final=(k == cfg.max_decades - 1))
        if verdict.status == 'converged':
            logger.debug("%s converged by rule %s after %d decades", quantity, verdict.rule, k + 1)
            return verdict.value
        if verdict.status == 'divergent':
            logger.debug("%s divergent by rule %s after %d decades", quantity, verdict.rule, k + 1)
            return Divergent(quantity, verdict.value, increments, verdict.rule)
    raise IndeterminateError("Decade budget exhausted for {}.".format(quantity))


@typechecked
def integrate_to_zero(f: Callable, upper: Real, cfg: QuadratureConfig=DEFAULT_QUADRATURE,
                      quantity: str="", points: Optional[Union[Sequence[float], np.ndarray]]=None):
    """
    Computes the integral of f over (0, upper] or returns `Divergent`.

    Parameters
    ----------
    f : callable
      Integrand of one positive variable.
    upper : float
      Upper limit (>0).
    cfg : QuadratureConfig
      Quadrature settings.
    quantity : str
      Name used in diagnostics.
    points : sequence of float, optional
      Breakpoints of the integrand.

    Returns
    -------
    float or Divergent

    Raises
    ------
    IndeterminateError
      When the decade series is inconclusive.
    """
    if upper <= 0:
        raise ValueError("upper must be positive.")
    return _decade_integral(f, upper, -1, cfg, quantity, points)


@typechecked
def integrate_to_infinity(f: Callable, lower: Real, cfg: QuadratureConfig=DEFAULT_QUADRATURE,
                          quantity: str="", points: Optional[Union[Sequence[float], np.ndarray]]=None):
    """
    Computes the integral of f over [lower, inf) or returns `Divergent`.
    """
    if lower <= 0:
        raise ValueError("lower must be positive.")
    return _decade_integral(f, lower, 1, cfg, quantity, points)


@typechecked
def integrate_positive_axis(f: Callable, breakpoints: Union[Sequence[float], np.ndarray]=(1.,),
                            cfg: QuadratureConfig=DEFAULT_QUADRATURE, quantity: str=""):
    """
    Integrates f over (0, inf), splitting at the given breakpoints.

    Returns `Divergent` as soon as one of the end pieces diverges.
    """

    # Initializations
    pts = sorted(set(float(b) for b in breakpoints if b > 0))
    if len(pts) == 0:
        pts = [1.]

    head = integrate_to_zero(f, pts[0], cfg, quantity + " near 0")
    if is_divergent(head):
        return head
    tail = integrate_to_infinity(f, pts[-1], cfg, quantity + " near infinity")
    if is_divergent(tail):
        return tail
    middle = 0.
    for lo, hi in zip(pts[:-1], pts[1:]):
        middle += quad_log(f, lo, hi, cfg)
    return head + middle + tail


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
