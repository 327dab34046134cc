# Created on 2020/9/16

# This module is for the nonlocal operators acting on frozen densities, the drift
# of the compensator and the split into small and large jumps.

# Standard library imports
from dataclasses import dataclass, field
import logging
from numbers import Real
from typing import Optional, Tuple

# Third party imports
import numpy as np
from typeguard import typechecked

# Local application imports
from ..exceptions import DomainError, NumericError, ResolutionError
from ..fouriertrf import inverse_transform
from ..profiles import CASE1, CASE2
from ..quadrature import (DEFAULT_QUADRATURE, QuadratureConfig, integrate_to_infinity,
                          integrate_to_zero, is_divergent, quad_log)
from .densities import DEFAULT_GRID, GridConfig, GridDensity, SpectralPlan
from .exponent import characteristic_exponent
from .kernels import FrozenKernelSpec

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


FIRST_ORDER = 'FirstOrder'
SECOND_DIFFERENCE = 'SecondDifference'


def _exit_radius(dens, x, u):
    """Distance from x along u to the boundary of the sampled box."""
    lo, hi = dens.x[0], dens.x[-1]
    radius = np.inf
    for xi, ui in zip(x, u):
        if ui > 0:
            radius = min(radius, (hi - xi) / ui)
        elif ui < 0:
            radius = min(radius, (lo - xi) / ui)
    return max(radius, 0.)


def _local_derivatives(dens, x, u):
    """Value, first and second directional derivatives of the interpolated density at x."""
    pt = x[None, :]
    f0 = float(dens.at(pt)[0])
    if dens.d == 1:
        return f0, float(dens.at(pt, 1)[0]) * u[0], float(dens.at(pt, 2)[0])
    g = np.array([dens.at(pt, (1, 0))[0], dens.at(pt, (0, 1))[0]])
    hxx, hxy, hyy = (float(dens.at(pt, k)[0]) for k in ((2, 0), (1, 1), (0, 2)))
    return f0, float(g @ u), float(u[0] * u[0] * hxx + 2. * u[0] * u[1] * hxy + u[1] * u[1] * hyy)


def _piece(f, a, b, quad):
    return quad_log(f, a, b, quad, points=[1.]) if b > a else 0.


@typechecked
def delta_phi_apply(dens: GridDensity, spec: FrozenKernelSpec, x, branch: str=FIRST_ORDER,
                    t: Optional[Real]=None, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> Tuple[float, float]:
    """
    Applies the nonlocal operator with kernel kappa(t, z) to a sampled density.

    Parameters
    ----------
    dens : GridDensity
      Density, interpolated by cubic splines and taken as zero outside its grid.
    spec : FrozenKernelSpec
      Kernel; its profile gives phi and the compensator.
    x : float or array_like
      Point of evaluation.
    branch : str
      'FirstOrder' for f(x+z) - f(x) - z^(phi).grad f(x),
      'SecondDifference' for (f(x+z) + f(x-z) - 2 f(x))/2.
    t : float, optional
      Time at which kappa is taken, dens.t by default.

    Returns
    -------
    float, float
      The operator value and the integral of |Delta f(x, z)| over z.

    Raises
    ------
    ResolutionError
      When the grid step exceeds phi^{-1}(s-t)/16.
    """

    # Checks
    if branch not in (FIRST_ORDER, SECOND_DIFFERENCE):
        raise DomainError("branch must be {!r} or {!r}.".format(FIRST_ORDER, SECOND_DIFFERENCE))
    if dens.d != spec.d:
        raise DomainError("Density and kernel dimensions differ.")
    scale = spec.profile.inverse(dens.s - dens.t)
    if dens.step > scale / 16.:
        raise ResolutionError("Grid step {:.3g} does not resolve the scale phi^-1(s-t) = {:.3g}; "
                              "use a step <= {:.3g}.".format(dens.step, scale, scale / 16.))

    # Initializations
    t = dens.t if t is None else float(t)
    x = np.asarray(x, dtype=float).reshape(spec.d)
    phi, comp = spec.profile.phi, spec.profile.compensator
    r_taylor = dens.step / 8.
    value, absolute = 0., 0.

    for u, weight in zip(spec.units, spec.weights):
        f0, du, d2u = _local_derivatives(dens, x, u)
        k = lambda r, u=u: float(spec(t, (r * u)[None, :])[0])
        w = lambda r: 1. / (r * float(phi(r)))
        if branch == FIRST_ORDER:
            reach = _exit_radius(dens, x, u)

            def delta(r, u=u, f0=f0, du=du):
                return (float(dens.at(x + r * u)[0]) - f0 - float(comp(r)) * r * du) * w(r)

            def head(r, du=du, d2u=d2u):
                return ((1. - float(comp(r))) * r * du + 0.5 * r * r * d2u) * w(r)

            def outside(r, f0=f0, du=du):
                return (-f0 - float(comp(r)) * r * du) * w(r)
        else:
            reach = max(_exit_radius(dens, x, u), _exit_radius(dens, x, -u))

            def delta(r, u=u, f0=f0):
                return 0.5 * (float(dens.at(x + r * u)[0]) + float(dens.at(x - r * u)[0]) - 2. * f0) * w(r)

            def head(r, d2u=d2u):
                return 0.5 * r * r * d2u * w(r)

            def outside(r, f0=f0):
                return -f0 * w(r)

        reach = max(reach, 2. * r_taylor)
        parts = [
            (head, lambda g: integrate_to_zero(g, r_taylor, quad, "operator near 0")),
            (delta, lambda g: _piece(g, r_taylor, reach, quad)),
            (outside, lambda g: integrate_to_infinity(g, reach, quad, "operator tail")),
        ]
        for fn, integrate in parts:
            v = integrate(lambda r, fn=fn, k=k: fn(r) * k(r))
            a = integrate(lambda r, fn=fn: abs(fn(r)))
            if is_divergent(v) or is_divergent(a):
                raise NumericError("Operator integral diverges at x={}.".format(x.tolist()))
            value += weight * v
            absolute += weight * a
    return float(value), float(absolute)


@typechecked
def drift_vector(spec: FrozenKernelSpec, t: Real, s: Real,
                 quad: QuadratureConfig=DEFAULT_QUADRATURE) -> np.ndarray:
    """
    Integral over [t, s] of the drift b(r) that turns the compensated process into
    the one driven by the generator with the other compensator:
    -int_{|z|<=1} z nu(dz) in Case1, 0 in Case2 and +int_{|z|>1} z nu(dz) in Case3.

    Raises
    ------
    NumericError
      When the defining integral diverges.
    """
    if not s > t:
        raise DomainError("drift_vector requires t < s.")
    case = spec.profile.case_tag
    if case == CASE2 or spec.symmetric_in_z:
        return np.zeros(spec.d)

    kbar = spec.averaged(t, s)
    phi = spec.profile.phi
    total = np.zeros(spec.d)
    for m, (u, weight) in enumerate(zip(spec.units, spec.weights)):
        g = kbar.along(m)
        integrand = lambda r, g=g: float(g(r)) / float(phi(r))
        if case == CASE1:
            value = integrate_to_zero(integrand, 1., quad, "drift near 0")
        else:
            value = integrate_to_infinity(integrand, 1., quad, "drift near infinity")
        if is_divergent(value):
            raise NumericError("Drift integral diverges along direction {}.".format(u.tolist()))
        total += weight * value * u
    sign = -1. if case == CASE1 else 1.
    return sign * (float(s) - float(t)) * total


@dataclass
class JumpPart:
    """
    Part of the jump measure restricted to small (|z| <= 1) or large (|z| > 1) jumps.

    Attributes
    ----------
    spec : FrozenKernelSpec
      Restricted kernel, with the compensator of the full profile.
    t, s : float
      Time window.
    rate : float, optional
      Total mass per unit time of the time-averaged measure (large jumps only).
    direction_rates : numpy.ndarray, optional
      Mass carried by each direction of the discretized sphere (large jumps only).
    """
    spec: FrozenKernelSpec
    t: float
    s: float
    rate: Optional[float] = None
    direction_rates: Optional[np.ndarray] = field(default=None, repr=False)

    def exponent(self, xi):
        """Characteristic exponent of this part over [t, s]."""
        return characteristic_exponent(self.spec, self.t, self.s, xi)


@typechecked
def large_jump_rates(spec: FrozenKernelSpec, t: Real=0., s: Real=1.,
                     quad: QuadratureConfig=DEFAULT_QUADRATURE) -> np.ndarray:
    """Per-direction masses W_m int_1^inf kbar(r u_m)/(r phi(r)) dr."""
    kbar = spec.averaged(t, s)
    phi = spec.profile.phi
    rates = np.empty(spec.units.shape[0])
    for m, weight in enumerate(spec.weights):
        g = kbar.along(m)
        value = integrate_to_infinity(lambda r, g=g: float(g(r)) / (r * float(phi(r))), 1., quad, "jump rate")
        if is_divergent(value):
            raise NumericError("Large-jump rate diverges.")
        rates[m] = weight * value
    return rates


@typechecked
def decompose_small_large(spec: FrozenKernelSpec, t: Real=0., s: Real=1.,
                          quad: QuadratureConfig=DEFAULT_QUADRATURE) -> Tuple[JumpPart, JumpPart]:
    """
    Splits the jump measure at |z| = 1.

    Returns
    -------
    JumpPart, JumpPart
      Small jumps (compensated as in the full measure) and large jumps, the
      latter a finite measure with total rate lambda.

    Notes
    -----
      The exponents of both parts add up to the exponent of the full kernel.
    """
    rates = large_jump_rates(spec, t, s, quad)
    small = JumpPart(spec.restricted(upper=1.), float(t), float(s))
    large = JumpPart(spec.restricted(lower=1.), float(t), float(s), float(rates.sum()), rates)
    logger.debug("Large jumps of %s: rate %.10g", spec.name, large.rate)
    return small, large


@typechecked
def drifted_density(spec: FrozenKernelSpec, t: Real, s: Real, grid: GridConfig=DEFAULT_GRID,
                    quad: QuadratureConfig=DEFAULT_QUADRATURE) -> GridDensity:
    """
    Density of the process driven by the generator with the truncated compensator,
    p(x - int_t^s b(r) dr), obtained by a spectral shift.
    """
    shift = drift_vector(spec, t, s, quad)
    plan = SpectralPlan(spec, t, s, grid, quad)
    xi = plan.grid.frequencies()
    phase = np.exp(1j * (xi * shift[0] if spec.d == 1 else xi @ shift))
    pts = plan.grid.points().reshape(-1, spec.d)
    raw = inverse_transform(plan.grid, plan.cf * phase)
    values = raw - plan.alias(pts - shift[None, :]).reshape(raw.shape)
    tail_mass, tail_left = plan.outside_mass()
    return GridDensity(values, plan.grid, plan.t, plan.s, tail_mass=tail_mass, tail_left=tail_left,
                       profile_id=spec.profile.name, kernel_id=spec.name, ring_rtol=grid.ring_rtol)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
