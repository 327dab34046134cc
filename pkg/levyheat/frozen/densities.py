# Created on 2020/9/14

# This module is for densities of frozen jump processes sampled on uniform grids
# by Fourier inversion of exp(Psi), with aliasing and tail corrections.

# Standard library imports
from dataclasses import dataclass, replace
import logging
from numbers import Real
from typing import List, Optional, Sequence, Union
import warnings

# Third party imports
import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline, RectBivariateSpline
from typeguard import typechecked

# Local application imports
from ..exceptions import ConfigurationError, DomainError, ResolutionError
from ..fouriertrf import FourierGrid, inverse_transform, inverse_transform_at, make_grid, spectral_derivative
from ..profiles import ScalingProfile, rho
from ..quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate_to_infinity, is_divergent
from .exponent import ExponentTable, decay_at, frequency_cutoff
from .kernels import FrozenKernelSpec

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


@dataclass(frozen=True)
class GridConfig:
    """
    Settings of the Fourier inversion.

    Attributes
    ----------
    n : int, optional
      Points per axis (power of two); 2^12 in d=1 and 2^9 in d=2 when None.
    step : float, optional
      Spatial step; chosen from the decay of exp(Psi) when None.
    decay : float
      Largest |exp Psi| accepted on the boundary of the frequency box; a value >= 1
      with a given step skips the check.
    nodes_per_decade : int
      Density of the frequency nodes of the exponent table.
    alias_images : int
      Periodic images corrected on each side (d=1) or per axis (d=2 uses a quarter of it, at least 2).
    ring_rtol : float
      Negative values below -ring_rtol max(p) are flagged as ringing.
    mass_tol : float
      Accepted deviation of the total mass from 1.
    """
    n: Optional[int] = None
    step: Optional[float] = None
    decay: float = 1e-16
    nodes_per_decade: int = 12
    alias_images: int = 64
    ring_rtol: float = 1e-8
    mass_tol: float = 1e-4

    def size(self, d):
        if self.n is not None:
            return self.n
        return 4096 if d == 1 else 512


DEFAULT_GRID = GridConfig()


class GridDensity:
    """
    Density sampled on a uniform grid.

    Attributes
    ----------
    values : numpy.ndarray
      Samples, shape (n,) in d=1 and (n, n) in d=2 (first index along x1).
    grid : FourierGrid
      Spatial grid.
    t, s : float
      Time window of the density.
    grid_mass : float
      Trapezoid integral of the samples.
    tail_mass : float
      Mass outside the grid, integrated from the tail model.
    tail_left : float, optional
      Part of tail_mass left of the grid (d=1).
    mass : float
      grid_mass + tail_mass.
    min_value : float
      Smallest sample.
    ringing : bool
      Whether min_value < -ring_rtol max(values).
    profile_id, kernel_id : str
      Names of the profile and the kernel.
    """

    def __init__(self, values, grid, t, s, grid_mass=None, tail_mass=0., tail_left=None,
                 profile_id="", kernel_id="", ring_rtol=1e-8, component=None):
        self.values = np.asarray(values, dtype=float)
        self.grid = grid
        self.t, self.s = float(t), float(s)
        self.grid_mass = float(self.step ** grid.d * np.sum(self.values)) if grid_mass is None else float(grid_mass)
        self.tail_mass = float(tail_mass)
        self.tail_left = tail_left
        self.mass = self.grid_mass + self.tail_mass
        self.profile_id = profile_id
        self.kernel_id = kernel_id
        self.component = component
        self.min_value = float(np.min(self.values))
        self.ringing = False
        if ring_rtol is not None:
            self.ringing = self.min_value < -ring_rtol * float(np.max(self.values))
        self._interp = None

    def __repr__(self):
        return "GridDensity(d={}, n={}, step={:.6g}, t={:g}, s={:g}, mass={:.10f})".format(
            self.d, self.grid.n, self.step, self.t, self.s, self.mass)

    @property
    def d(self):
        return self.grid.d

    @property
    def step(self):
        return self.grid.step

    @property
    def origin(self):
        return self.grid.origin

    @property
    def x(self):
        return self.grid.axis()

    def _interpolator(self):
        if self._interp is None:
            if self.d == 1:
                self._interp = CubicSpline(self.x, self.values)
            else:
                self._interp = RectBivariateSpline(self.x, self.x, self.values, kx=3, ky=3)
        return self._interp

    def at(self, points, derivative=0):
        """
        Cubic interpolation of the samples (or of a derivative) at points;
        zero outside the grid.

        Parameters
        ----------
        points : array_like
          Shape (m,) in d=1, (m, 2) in d=2.
        derivative : int or tuple
          Order of derivative (d=1) or pair of orders (d=2).
        """
        pts = np.asarray(points, dtype=float).reshape(-1, self.d)
        lo, hi = self.x[0], self.x[-1]
        inside = np.all((pts >= lo) & (pts <= hi), axis=1)
        out = np.zeros(pts.shape[0])
        f = self._interpolator()
        if self.d == 1:
            out[inside] = f(pts[inside, 0], derivative)
        else:
            dx, dy = derivative if isinstance(derivative, tuple) else (0, 0)
            out[inside] = f.ev(pts[inside, 0], pts[inside, 1], dx=dx, dy=dy)
        return out

    def cdf(self):
        """
        Distribution function on the grid (d=1), including the tail mass on the left.
        """
        if self.d != 1:
            raise DomainError("cdf is defined for d=1.")
        left = self.tail_left if self.tail_left is not None else 0.5 * self.tail_mass
        return left + self.step * (np.cumsum(self.values) - 0.5 * self.values)

    # EXPORT

    def to_frame(self):
        """Samples as a pandas DataFrame with columns x (or x1, x2) and p."""
        if self.d == 1:
            return pd.DataFrame({'x': self.x, 'p': self.values})
        pts = self.grid.points().reshape(-1, 2)
        return pd.DataFrame({'x1': pts[:, 0], 'x2': pts[:, 1], 'p': self.values.ravel()})

    def metadata(self):
        return {'t': self.t, 's': self.s, 'profile': self.profile_id, 'kernel': self.kernel_id,
                'mass': self.mass, 'tail_mass': self.tail_mass, 'step': self.step, 'n': self.grid.n,
                'd': self.d}

    def to_csv(self, path):
        """
        Writes the samples to CSV, preceded by '# key=value' metadata lines.
        """
        with open(path, 'w') as fh:
            for key, value in self.metadata().items():
                fh.write("# {}={}\n".format(key, value))
            self.to_frame().to_csv(fh, index=False, float_format='%.17g')

    @classmethod
    def from_csv(cls, path):
        """Reads a file written by `to_csv`."""
        meta = {}
        with open(path) as fh:
            for line in fh:
                if not line.startswith('#'):
                    break
                key, _, value = line[1:].strip().partition('=')
                meta[key] = value
        frame = pd.read_csv(path, comment='#', float_precision='round_trip')
        d, n = int(meta['d']), int(meta['n'])
        grid = make_grid(n, float(meta['step']), d)
        values = frame['p'].to_numpy()
        if d == 2:
            values = values.reshape(n, n)
        return cls(values, grid, float(meta['t']), float(meta['s']),
                   tail_mass=float(meta['tail_mass']), profile_id=meta.get('profile', ''),
                   kernel_id=meta.get('kernel', ''), ring_rtol=None)

    def plot(self, x_max=None, ax=None, log=False):
        """Plots the density (d=1) or its contour map (d=2)."""
        import matplotlib.pyplot as plt
        if ax is None:
            _, ax = plt.subplots(figsize=(10, 5))
        if self.d == 1:
            keep = slice(None) if x_max is None else np.abs(self.x) <= x_max
            ax.plot(self.x[keep], self.values[keep], label="p({:g},{:g})".format(self.t, self.s))
            if log:
                ax.set_yscale('log')
            ax.set_xlabel("x")
            ax.legend()
        else:
            ax.contour(self.x, self.x, self.values.T, levels=20)
            ax.set_xlabel("x1")
            ax.set_ylabel("x2")
        return ax


# SPECTRAL PLAN

class SpectralPlan:
    """
    Frequency grid, tabulated exponent and tail model of a frozen kernel on [t, s].
    """

    def __init__(self, spec: FrozenKernelSpec, t, s, cfg: GridConfig=DEFAULT_GRID,
                 quad: QuadratureConfig=DEFAULT_QUADRATURE):

        # Checks
        if not (np.isfinite(t) and np.isfinite(s) and 0 <= t < s):
            raise DomainError("Densities require 0 <= t < s, got t={}, s={}.".format(t, s))

        self.spec = spec
        self.t, self.s = float(t), float(s)
        self.cfg = cfg
        self.quad = quad
        self.d = spec.d
        self.kbar = spec.averaged(t, s)

        if cfg.step is None:
            step = np.pi / frequency_cutoff(spec, t, s, cfg.decay, quad)
        elif cfg.decay >= 1:
            step = float(cfg.step)
        else:
            step = float(cfg.step)
            level = decay_at(spec, t, s, np.pi / step, quad)
            if level > cfg.decay:
                required = np.pi / frequency_cutoff(spec, t, s, cfg.decay, quad)
                raise ConfigurationError(
                    "Frequency box too small: |exp Psi| = {:.3g} > {:.1g} at the boundary; "
                    "the grid step must be at most {:.6g}.".format(level, cfg.decay, required),
                    diagnostics={'step': step, 'required_step': required, 'decay': level})
        self.grid = make_grid(cfg.size(self.d), float(step), self.d)

        lo = 0.25 * 2. * np.pi / self.grid.length
        hi = 1.01 * np.sqrt(self.d) * self.grid.nyquist
        n_nodes = max(int(np.ceil(cfg.nodes_per_decade * np.log10(hi / lo))) + 1, 8)
        self.table = ExponentTable(spec, t, s, np.geomspace(lo, hi, n_nodes), self.kbar, quad)
        self.cf = np.exp(self.table(self.grid.frequencies()))
        self._images = self._image_offsets()
        self._remainder = None
        logger.info("Spectral plan for %s on [%g, %g]: n=%d, step=%.6g, length=%.6g",
                    spec.name, t, s, self.grid.n, step, self.grid.length)

    # TAIL MODEL

    def tail(self, points):
        """Jump density (s-t) kbar(y)/(|y|^d phi(|y|)), the large-|y| behaviour of p."""
        pts = np.asarray(points, dtype=float).reshape(-1, self.d)
        r = np.sqrt(np.sum(pts * pts, axis=1))
        out = np.zeros(pts.shape[0])
        nz = r > 0
        out[nz] = (self.s - self.t) * self.kbar(pts[nz]) / (r[nz] ** self.d * self.spec.profile.phi(r[nz]))
        return out

    def tail_gradient(self, points, axis):
        pts = np.asarray(points, dtype=float).reshape(-1, self.d)
        r = np.sqrt(np.sum(pts * pts, axis=1))
        delta = 1e-6 * np.maximum(r, 1e-300)
        up, down = pts.copy(), pts.copy()
        up[:, axis] += delta
        down[:, axis] -= delta
        return (self.tail(up) - self.tail(down)) / (2. * delta)

    def radial_tail(self, m, lower):
        """Mass of the tail model along direction m beyond radius `lower`."""
        g = self.kbar.along(m)
        phi = self.spec.profile.phi
        value = integrate_to_infinity(lambda r: float(g(r)) / (r * float(phi(r))), lower, self.quad,
                                      "tail mass")
        if is_divergent(value):
            raise ResolutionError("Tail mass diverges along direction {}.".format(m))
        return (self.s - self.t) * self.spec.weights[m] * value

    def _image_offsets(self):
        L = self.grid.length
        if self.d == 1:
            k = np.arange(1, self.cfg.alias_images + 1)
            return np.concatenate([k, -k])[:, None] * L
        K = max(self.cfg.alias_images // 16, 2)
        k = np.arange(-K, K + 1)
        K1, K2 = np.meshgrid(k, k, indexing='ij')
        keep = (K1 != 0) | (K2 != 0)
        return np.column_stack([K1[keep], K2[keep]]) * L

    def _alias_remainder(self):
        """Images beyond the corrected ones, approximated by an integral of the tail model."""
        if self._remainder is None:
            L = self.grid.length
            if self.d == 1:
                R = (self.cfg.alias_images + 0.5) * L
            else:
                K = max(self.cfg.alias_images // 16, 2)
                R = (2 * K + 1) * L / np.sqrt(np.pi)
            self._remainder = sum(self.radial_tail(m, R) for m in range(self.spec.units.shape[0])) / L ** self.d
        return self._remainder

    def alias(self, points, axis=None):
        """
        Sum over periodic images k != 0 of the tail model (or of its derivative along `axis`).
        """
        pts = np.asarray(points, dtype=float).reshape(-1, self.d)
        total = np.zeros(pts.shape[0])
        for offset in self._images:
            shifted = pts + offset[None, :]
            total += self.tail(shifted) if axis is None else self.tail_gradient(shifted, axis)
        if axis is None:
            total += self._alias_remainder()
        return total

    def outside_mass(self):
        """Mass of the tail model outside the grid, total and on the left (d=1)."""
        h, half = self.grid.step, 0.5 * self.grid.length
        if self.d == 1:
            right = self.radial_tail(0, half - 0.5 * h)
            left = self.radial_tail(1, half + 0.5 * h)
            return left + right, left
        total = 0.
        for m, u in enumerate(self.spec.units):
            total += self.radial_tail(m, half / np.max(np.abs(u)))
        return total, None


def _checked(plan, values, component=None):
    pts = plan.grid.points().reshape(-1, plan.d)
    corrected = values - plan.alias(pts).reshape(values.shape)
    tail_mass, tail_left = plan.outside_mass()
    dens = GridDensity(corrected, plan.grid, plan.t, plan.s, tail_mass=tail_mass, tail_left=tail_left,
                       profile_id=plan.spec.profile.name, kernel_id=plan.spec.name,
                       ring_rtol=plan.cfg.ring_rtol, component=component)
    if dens.ringing:
        warnings.warn("Negative FFT ringing in density of {}: min {:.3g}.".format(plan.spec.name, dens.min_value))
    elif dens.min_value < 0:
        logger.info("Tolerated negative samples down to %.3g", dens.min_value)
    if abs(dens.mass - 1.) > plan.cfg.mass_tol:
        warnings.warn("Mass of density of {} on [{:g}, {:g}] is {:.8f}.".format(plan.spec.name, plan.t, plan.s, dens.mass))
    return dens


# OPERATIONS

@typechecked
def density_fft(spec: FrozenKernelSpec, t: Real, s: Real, grid: GridConfig=DEFAULT_GRID,
                quad: QuadratureConfig=DEFAULT_QUADRATURE) -> GridDensity:
    """
    Computes the density of the frozen process increment over [t, s] on a grid.

    Parameters
    ----------
    spec : FrozenKernelSpec
      Kernel.
    t, s : float
      Times with 0 <= t < s.
    grid : GridConfig
      Grid settings.

    Returns
    -------
    GridDensity

    Raises
    ------
    ConfigurationError
      When a given step leaves |exp Psi| above the decay threshold.

    Notes
    -----
      The inverse transform uses the (2 pi)^-d normalization, so the total mass is 1.
    """
    plan = SpectralPlan(spec, t, s, grid, quad)
    return _checked(plan, inverse_transform(plan.grid, plan.cf))


@typechecked
def gradient(spec: FrozenKernelSpec, t: Real, s: Real, grid: GridConfig=DEFAULT_GRID,
             quad: QuadratureConfig=DEFAULT_QUADRATURE) -> List[GridDensity]:
    """
    Spatial gradient of the density, one GridDensity per axis, by spectral differentiation.
    """
    plan = SpectralPlan(spec, t, s, grid, quad)
    pts = plan.grid.points().reshape(-1, plan.d)
    out = []
    for axis in range(plan.d):
        raw = spectral_derivative(plan.grid, plan.cf, axis)
        values = raw - plan.alias(pts, axis=axis).reshape(raw.shape)
        out.append(GridDensity(values, plan.grid, plan.t, plan.s, grid_mass=0., profile_id=spec.profile.name,
                               kernel_id=spec.name, ring_rtol=None, component=axis))
    return out


@typechecked
def density_scaled(spec: FrozenKernelSpec, t: Real, s: Real, x, grid: GridConfig=DEFAULT_GRID,
                   quad: QuadratureConfig=DEFAULT_QUADRATURE):
    """
    Evaluates the density at points x through the unit-time density of the
    rescaled kernel: p_{t,s}(x) = a^-d p~_{0,1}(x/a) with a = phi^{-1}(s-t).

    Returns
    -------
    float or numpy.ndarray
    """
    lam = float(s) - float(t)
    if not (t >= 0 and lam > 0):
        raise DomainError("density_scaled requires 0 <= t < s.")
    a = spec.profile.inverse(lam)
    unit = spec.rescaled(float(t), lam)
    plan = SpectralPlan(unit, 0., 1., grid, quad)

    x_arr = np.asarray(x, dtype=float)
    single = x_arr.size == spec.d
    y = x_arr.reshape(-1, spec.d) / a
    if np.any(np.abs(y) > 0.45 * plan.grid.length):
        raise ResolutionError("Points beyond the grid of the rescaled density (|x|/a > {:.6g})."
                              .format(0.45 * plan.grid.length))
    values = (inverse_transform_at(plan.grid, plan.cf, y) - plan.alias(y)) / a ** spec.d
    return float(values[0]) if single else values.reshape(x_arr.shape[:1] if spec.d > 1 else x_arr.shape)


@typechecked
def tail_density(spec: FrozenKernelSpec, t: Real, s: Real, x) -> np.ndarray:
    """Large-|x| model (s-t) kbar(x)/(|x|^d phi(|x|)) of the density."""
    kbar = spec.averaged(t, s)
    pts = np.asarray(x, dtype=float).reshape(-1, spec.d)
    r = np.sqrt(np.sum(pts * pts, axis=1))
    return (float(s) - float(t)) * kbar(pts) / (r ** spec.d * spec.profile.phi(r))

# COMPARISONS

def _radii(dens):
    pts = dens.grid.points().reshape(-1, dens.d)
    return np.sqrt(np.sum(pts * pts, axis=1)), dens.values.reshape(-1)


def ratio_bracket(dens: GridDensity, profile: ScalingProfile, reach: Real=20.):
    """
    Smallest and largest p / ((s-t) rho_phi) over the grid points with
    |x| <= reach phi^{-1}(s-t) that stay inside the central 90% of the box.

    Returns
    -------
    (float, float)
    """
    lam = dens.s - dens.t
    r, p = _radii(dens)
    keep = (r <= reach * profile.inverse(lam)) & (r <= 0.45 * dens.grid.length)
    ratio = p[keep] / (lam * rho(profile, lam, r[keep]))
    return float(np.min(ratio)), float(np.max(ratio))


@dataclass
class DependenceReport:
    """
    Sup-distance between the densities of kappa and kappa + eps.

    Attributes
    ----------
    eps : numpy.ndarray
      Perturbations, in decreasing order.
    sup : numpy.ndarray
      sup |p - p_eps| / rho_phi over the window.
    ratios : numpy.ndarray
      sup[k+1] / sup[k].
    """
    eps: np.ndarray
    sup: np.ndarray
    ratios: np.ndarray

    @property
    def passed(self):
        """Whether each ratio, normalized to a halving of eps, lies in [0.45, 0.55]."""
        scaled = 0.5 * self.ratios / (self.eps[1:] / self.eps[:-1])
        return bool(np.all((scaled >= 0.45) & (scaled <= 0.55)))


@typechecked
def perturbation_sweep(spec: FrozenKernelSpec, t: Real, s: Real,
                       eps: Union[Sequence[float], np.ndarray]=(0.05, 0.025, 0.0125),
                       grid: GridConfig=DEFAULT_GRID, reach: Real=20.,
                       quad: QuadratureConfig=DEFAULT_QUADRATURE) -> DependenceReport:
    """
    Measures how the frozen density moves when the kernel is shifted by a constant.

    Each perturbed density is computed on the grid of the unperturbed one, and the
    distance is weighted by rho_phi over |x| <= reach phi^{-1}(s-t). A density that
    depends Lipschitz-continuously on kappa gives ratios close to those of the eps.
    """

    # Checks
    shifts = np.asarray(eps, dtype=float)
    if shifts.size < 2 or np.any(shifts <= 0) or np.any(np.diff(shifts) >= 0):
        raise ConfigurationError("Perturbations must be positive, decreasing, and at least two.")

    # Initializations
    base = density_fft(spec, t, s, grid, quad)
    aligned = replace(grid, n=base.grid.n, step=base.step, decay=1.)
    lam = float(s) - float(t)
    r, p = _radii(base)
    keep = (r <= reach * spec.profile.inverse(lam)) & (r <= 0.45 * base.grid.length)
    weight = rho(spec.profile, lam, r[keep])

    sup = []
    for e in shifts:
        shifted = FrozenKernelSpec(lambda time, z, e=float(e): spec.kappa(time, z) + e, spec.profile,
                                   spec.kappa0 + float(e), spec.symmetric_in_z, spec.time_homogeneous,
                                   name="{}+{:g}".format(spec.name, e), n_angles=spec.n_angles, validate=False)
        other = density_fft(shifted, t, s, aligned, quad).values.reshape(-1)
        sup.append(float(np.max(np.abs(p[keep] - other[keep]) / weight)))
    sup = np.asarray(sup)
    report = DependenceReport(shifts, sup, sup[1:] / sup[:-1])
    logger.info("Perturbation sweep of %s: ratios %s", spec.name, np.array2string(report.ratios, precision=4))
    return report


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
