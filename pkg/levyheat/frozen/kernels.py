# Created on 2020/9/8

# This module is for x-independent jump intensities kappa(t, z) and their time averages.

# Standard library imports
import logging
from numbers import Real
from typing import Callable, Optional
import warnings

# Third party imports
import numpy as np
from scipy import integrate
from typeguard import typechecked

# Local application imports
from ..exceptions import ConfigurationError, DomainError, ModelError
from ..profiles import CASE2, ScalingProfile

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


def directions(d, n_angles=64):
    """
    Unit directions u_m and angular weights W_m with sum_m W_m f(u_m) ~ surface integral.

    Returns
    -------
    numpy.ndarray of shape (M, d), numpy.ndarray of shape (M,)
    """
    if d == 1:
        return np.array([[1.], [-1.]]), np.array([1., 1.])
    if d == 2:
        theta = 2. * np.pi * np.arange(n_angles) / n_angles
        return np.column_stack([np.cos(theta), np.sin(theta)]), np.full(n_angles, 2. * np.pi / n_angles)
    raise DomainError("Jump measures are discretized for d in {1, 2}.")


class FrozenKernelSpec:
    """
    Jump intensity kappa(t, z), independent of the position, for the measure
    kappa(t,z)/(|z|^d phi(|z|)) dz.

    Attributes
    ----------
    kappa : callable
      kappa(t, z) with t a float and z an array of shape (n, d), returning shape (n,).
    profile : ScalingProfile
      Radial scale function.
    kappa0 : float
      Bound with 1/kappa0 <= kappa <= kappa0.
    symmetric_in_z : bool
      Whether kappa(t, -z) = kappa(t, z).
    time_homogeneous : bool
      Whether kappa does not depend on t (detected when not given).
    name : str
      Name or nickname of the kernel.
    family, params : str, dict
      Built-in family and its parameters, used for serialization.
    """

    def __init__(self, kappa, profile, kappa0=1., symmetric_in_z=False, time_homogeneous=None,
                 name="", family="callable", params=None, n_angles=64, validate=True):

        # Checks
        if not callable(kappa):
            raise TypeError("kappa must be callable.")
        if not isinstance(profile, ScalingProfile):
            raise TypeError("profile must be a ScalingProfile.")
        if kappa0 < 1:
            raise ValueError("kappa0 must be >= 1.")

        self.kappa = kappa
        self.profile = profile
        self.kappa0 = float(kappa0)
        self.symmetric_in_z = bool(symmetric_in_z)
        self.name = name if name else family
        self.family = family
        self.params = dict(params or {})
        self.d = profile.d
        self.n_angles = int(n_angles)
        self.units, self.weights = directions(self.d, self.n_angles)
        self._points = self._test_points()

        if time_homogeneous is None:
            time_homogeneous = self._detect_homogeneity()
        self.time_homogeneous = bool(time_homogeneous)

        if validate:
            check_bounds(self)
            if profile.case_tag == CASE2 and not self.symmetric_in_z:
                check_odd_cancellation(self)

    def __repr__(self):
        return "FrozenKernelSpec({}, {})".format(self.name, self.profile.name)

    def __call__(self, t, z):
        z = np.asarray(z, dtype=float).reshape(-1, self.d)
        return np.asarray(self.kappa(float(t), z), dtype=float).reshape(-1)

    def _test_points(self):
        r = np.logspace(-6, 3, 28)
        return (r[:, None, None] * self.units[None, :, :]).reshape(-1, self.d)

    def _detect_homogeneity(self):
        reference = self(0., self._points)
        return all(np.array_equal(reference, self(t, self._points)) for t in (0.37, 1., 2.3))

    def averaged(self, t, s, order=16, tol=1e-9, max_panels=64):
        """Returns the time average of kappa over [t, s] as an AveragedKernel."""
        return AveragedKernel(self, t, s, order, tol, max_panels)

    def rescaled(self, t, lam):
        """
        Kernel (r, z) -> kappa(t + lam r, phi^{-1}(lam) z) with the profile
        phi(u phi^{-1}(lam))/lam; its unit-time density rescales to the density on [t, t+lam].
        """
        if lam <= 0:
            raise DomainError("Rescaling factor must be positive.")
        a = self.profile.inverse(lam)
        base = self.kappa
        return FrozenKernelSpec(lambda r, z: base(t + lam * r, a * z), self.profile.rescaled(lam),
                                self.kappa0, self.symmetric_in_z, self.time_homogeneous,
                                name="{}@({:g},{:g})".format(self.name, t, lam), family='rescaled',
                                n_angles=self.n_angles, validate=False)

    def restricted(self, lower=0., upper=np.inf):
        """Kernel kappa 1_{lower < |z| <= upper}; bounds below no longer hold."""
        base = self.kappa

        def kappa(t, z):
            r = np.sqrt(np.sum(z * z, axis=1))
            return base(t, z) * ((r > lower) & (r <= upper))

        return FrozenKernelSpec(kappa, self.profile, self.kappa0, self.symmetric_in_z, self.time_homogeneous,
                                name="{}|({:g},{:g}]".format(self.name, lower, upper), family='restricted',
                                n_angles=self.n_angles, validate=False)

    def to_config(self):
        """Returns {name, params} of a built-in kernel."""
        if self.family not in KERNELS:
            raise ConfigurationError("Kernel {} cannot be serialized.".format(self.name))
        return {'name': self.family, 'params': dict(self.params)}


class AveragedKernel:
    """
    Time average kbar(z) = int_0^1 kappa(t + (s-t) u, z) du by a composite
    Gauss-Legendre rule, refined by doubling the number of panels until two
    successive rules agree within `tol` kappa0 on test points.
    """

    def __init__(self, spec, t, s, order=16, tol=1e-9, max_panels=64):
        if not s > t:
            raise DomainError("Time average requires t < s.")
        self.spec = spec
        self.t, self.s = float(t), float(s)
        if spec.time_homogeneous:
            self.times, self.weights = np.array([self.t]), np.array([1.])
            self.panels = 0
            return

        x, w = np.polynomial.legendre.leggauss(order)
        panels = 1
        times, weights = self._rule(x, w, panels)
        current = self._apply(times, weights, spec._points)
        while True:
            times2, weights2 = self._rule(x, w, 2 * panels)
            refined = self._apply(times2, weights2, spec._points)
            gap = float(np.max(np.abs(refined - current)))
            times, weights, current, panels = times2, weights2, refined, 2 * panels
            if gap <= tol * spec.kappa0:
                break
            if panels >= max_panels:
                warnings.warn("Time average of {} not resolved within {} panels (gap {:.3g})."
                              .format(spec.name, panels, gap))
                break
        self.times, self.weights, self.panels = times, weights, panels

    def _rule(self, x, w, panels):
        u = (np.arange(panels)[:, None] + 0.5 * (x[None, :] + 1.)) / panels
        return (self.t + (self.s - self.t) * u).ravel(), np.tile(w / (2. * panels), panels)

    def _apply(self, times, weights, z):
        total = np.zeros(z.shape[0])
        for ti, wi in zip(times, weights):
            total += wi * self.spec(ti, z)
        return total

    def __call__(self, z):
        z = np.asarray(z, dtype=float).reshape(-1, self.spec.d)
        return self._apply(self.times, self.weights, z)

    def along(self, m):
        """Radial function r -> kbar(r u_m) along direction m, vectorized in r."""
        u = self.spec.units[m]

        def g(r):
            r = np.asarray(r, dtype=float)
            return self(r.reshape(-1, 1) * u[None, :]).reshape(r.shape)

        return g


# CHECKS

@typechecked
def check_bounds(spec: FrozenKernelSpec, times: Optional[np.ndarray]=None) -> float:
    """
    Checks 1/kappa0 <= kappa <= kappa0 on a lattice of times and jumps.

    Returns
    -------
    float
      Largest max(kappa, 1/kappa) met on the lattice.

    Raises
    ------
    ModelError
      When the bounds are violated.
    """
    times = np.linspace(0., 1., 5) if times is None else times
    worst = 1.
    for t in times:
        values = spec(t, spec._points)
        if np.any(values <= 0) or not np.all(np.isfinite(values)):
            raise ModelError("kappa of {} is not positive at t={}.".format(spec.name, t))
        worst = max(worst, float(np.max(values)), float(np.max(1. / values)))
    if worst > spec.kappa0 * (1. + 1e-12):
        raise ModelError("kappa of {} leaves [1/kappa0, kappa0] (reaches {:.6g}, kappa0={:.6g})."
                         .format(spec.name, worst, spec.kappa0))
    return worst


@typechecked
def check_odd_cancellation(spec: FrozenKernelSpec, radii=(0.1, 1., 10.), times=(0., 0.5, 1.),
                           tol: Real=1e-8) -> float:
    """
    Checks that the integral of z kappa(t,z) over |z| <= r vanishes.

    Raises
    ------
    ModelError
      When the relative first moment exceeds `tol`.
    """
    worst = 0.
    for t in times:
        def moment(rho):
            z = rho * spec.units
            return rho ** spec.d * (spec.weights * spec(t, z)) @ spec.units

        for r in radii:
            value, _ = integrate.quad_vec(moment, 0., r, epsabs=1e-14, epsrel=1e-12)
            scale = spec.kappa0 * spec.weights.sum() * r ** (spec.d + 1) / (spec.d + 1)
            worst = max(worst, float(np.max(np.abs(value))) / scale)
    if worst > tol:
        raise ModelError("Odd part of {} does not cancel on balls (relative moment {:.3g}); "
                         "a non-symmetric kernel needs this in the truncated case.".format(spec.name, worst))
    return worst


# BUILT-IN KERNELS

@typechecked
def constant_kernel(profile: ScalingProfile, c: Real=1.) -> FrozenKernelSpec:
    """kappa = c."""
    if c <= 0:
        raise ValueError("c must be positive.")
    c = float(c)
    return FrozenKernelSpec(lambda t, z: np.full(z.shape[0], c), profile, max(c, 1. / c), True, True,
                            family='constant', params={'c': c}, name="kappa={:g}".format(c))


@typechecked
def sign_asymmetric_kernel(profile: ScalingProfile, a: Real=0.5) -> FrozenKernelSpec:
    """kappa = 1 + a sign(z_1), |a| < 1."""
    if not abs(a) < 1:
        raise ValueError("|a| must be < 1.")
    a = float(a)
    k0 = max(1. + abs(a), 1. / (1. - abs(a)))
    return FrozenKernelSpec(lambda t, z: 1. + a * np.sign(z[:, 0]), profile, k0, a == 0., True,
                            family='sign_asymmetric', params={'a': a}, name="1+{:g}sign".format(a))


@typechecked
def smooth_angular_kernel(profile: ScalingProfile, a: Real=0.3) -> FrozenKernelSpec:
    """kappa = 1 + a (z_1^2 - z_2^2)/|z|^2 in d=2 (symmetric), 1 in d=1."""
    if not abs(a) < 1:
        raise ValueError("|a| must be < 1.")
    a = float(a)
    k0 = max(1. + abs(a), 1. / (1. - abs(a)))

    def kappa(t, z):
        if z.shape[1] == 1:
            return np.ones(z.shape[0])
        n2 = np.sum(z * z, axis=1)
        with np.errstate(invalid='ignore', divide='ignore'):
            c2 = np.where(n2 > 0, (z[:, 0] ** 2 - z[:, 1] ** 2) / n2, 0.)
        return 1. + a * c2

    return FrozenKernelSpec(kappa, profile, k0, True, True, family='smooth_angular', params={'a': a},
                            name="angular({:g})".format(a))


@typechecked
def time_modulated_kernel(profile: ScalingProfile, a: Real=0.3, frequency: Real=1.) -> FrozenKernelSpec:
    """kappa = 1 + a sin(2 pi f t), symmetric and time-inhomogeneous."""
    if not abs(a) < 1:
        raise ValueError("|a| must be < 1.")
    a, f = float(a), float(frequency)
    k0 = max(1. + abs(a), 1. / (1. - abs(a)))
    return FrozenKernelSpec(lambda t, z: np.full(z.shape[0], 1. + a * np.sin(2. * np.pi * f * t)),
                            profile, k0, True, a == 0., family='time_modulated',
                            params={'a': a, 'frequency': f}, name="time({:g},{:g})".format(a, f))


KERNELS = {
    'constant': constant_kernel,
    'sign_asymmetric': sign_asymmetric_kernel,
    'smooth_angular': smooth_angular_kernel,
    'time_modulated': time_modulated_kernel,
}


@typechecked
def kernel_from_config(config: dict, profile: ScalingProfile) -> FrozenKernelSpec:
    """
    Builds a built-in kernel from {name, params}.

    Raises
    ------
    ConfigurationError
      When the name is unknown or parameters are invalid.
    """
    name = config.get('name')
    if name not in KERNELS:
        raise ConfigurationError("Unknown kernel {!r}, expected one of {}.".format(name, sorted(KERNELS)))
    try:
        return KERNELS[name](profile, **config.get('params', {}))
    except (TypeError, ValueError) as err:
        raise ConfigurationError("Invalid parameters for kernel {}: {}".format(name, err))


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
