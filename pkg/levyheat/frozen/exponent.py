# Created on 2020/9/10

# This module is for the characteristic exponent of a frozen jump intensity,
# computed direction by direction from radial cosine and sine transforms.

# Standard library imports
import logging
from numbers import Real

# Third party imports
import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline
from scipy.special import factorial
from typeguard import typechecked

# Local application imports
from ..exceptions import ModelError, NumericError, ResolutionError
from ..profiles import CASE1, CASE2, CASE3
from ..quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate_to_infinity, integrate_to_zero, is_divergent
from .kernels import FrozenKernelSpec

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


# Highest power of the Taylor expansions of cos and sin used below r = 1/omega
KMAX = 17
_POWERS = np.arange(KMAX + 1)
_EVEN = np.arange(2, KMAX, 2)
_ODD = np.arange(3, KMAX + 1, 2)

# Range of |omega| handled by the radial transforms
OMEGA_MIN = 1e-12
OMEGA_MAX = 1e14


class RadialTransform:
    """
    Cosine and sine transforms of the radial jump density w(r) = g(r)/(r phi(r))
    along one direction:

      Ic(omega) = int_0^inf w(r) (1 - cos(omega r)) dr
      Is(omega) = int_0^inf w(r) (sin(omega r) - omega r c(r)) dr

    with c the compensator factor of the profile.

    Notes
    -----
      Below r = 1/omega both integrands are expanded in powers of omega r, so
      only moments int w r^k dr are integrated there. Above it the oscillatory
      integrals are handed to QUADPACK's Fourier integrators.
    """

    def __init__(self, g, profile, with_odd=True, quad: QuadratureConfig=DEFAULT_QUADRATURE):
        self.g = g
        self.profile = profile
        self.with_odd = with_odd
        self.quad = quad
        self.case = profile.case_tag

        # Tail mass and first moments anchored at r = 1
        self.tail0 = self._finite(integrate_to_infinity(self.weight, 1., quad, "tail mass"), "tail mass")
        self.head1 = 0.
        self.tail1 = 0.
        if with_odd and self.case == CASE1:
            self.head1 = self._finite(integrate_to_zero(lambda r: self.weight(r) * r, 1., quad, "first moment"),
                                      "first moment near 0")
        if with_odd and self.case == CASE3:
            self.tail1 = self._finite(integrate_to_infinity(lambda r: self.weight(r) * r, 1., quad, "first moment"),
                                      "first moment near infinity")

    @staticmethod
    def _finite(value, what):
        if is_divergent(value):
            raise ModelError("The {} of the jump measure diverges.".format(what), diagnostics={'value': repr(value)})
        return value

    def weight(self, r):
        r = np.asarray(r, dtype=float)
        out = self.g(r) / (r * self.profile.phi(r))
        return float(out) if out.ndim == 0 else out

    def _moments(self, a, b):
        """int_a^b w(r) r^k dr for k = 0..KMAX, integrated in log r."""
        def f(u):
            r = np.exp(u)
            return self.weight(r) * r * (r / b) ** _POWERS

        value, _ = integrate.quad_vec(f, np.log(a), np.log(b), epsrel=1e-12, norm='max', limit=self.quad.limit)
        return value * b ** _POWERS

    def _base_moments(self, r0):
        """int_0^r0 w(r) r^k dr for k >= 2."""
        base = np.zeros(KMAX + 1)
        base[2] = self._finite(integrate_to_zero(lambda r: self.weight(r) * r * r, r0, self.quad, "second moment"),
                               "second moment near 0")

        def f(u):
            r = np.exp(u)
            return self.weight(r) * r * (r / r0) ** _POWERS[3:]

        value, _ = integrate.quad_vec(f, np.log(r0) - 80., np.log(r0), epsrel=1e-12, norm='max',
                                      limit=self.quad.limit)
        base[3:] = value * r0 ** _POWERS[3:]
        return base

    def _oscillatory(self, a, omega, scale):
        """(int_a^inf w cos(omega r) dr, int_a^inf w sin(omega r) dr)."""
        epsabs = max(1e-13 * scale, 1e-300)
        kinds = ('cos', 'sin') if self.with_odd else ('cos',)
        out = [0., 0.]
        for i, kind in enumerate(kinds):
            total, error = 0., 0.
            lower = a
            if a < 1.:
                v, e = integrate.quad(self.weight, a, 1., weight=kind, wvar=omega, epsabs=epsabs,
                                      epsrel=1e-12, limit=self.quad.limit, maxp1=100)[:2]
                total, error, lower = v, e, 1.
            v, e = integrate.quad(self.weight, lower, np.inf, weight=kind, wvar=omega, epsabs=epsabs,
                                  limlst=100, limit=self.quad.limit)[:2]
            total, error = total + v, error + e
            if not np.isfinite(total) or error > 1e-7 * max(scale, abs(total)):
                raise NumericError("Oscillatory tail integral failed at omega={:.6g}.".format(omega),
                                   diagnostics={'omega': omega, 'lower': a, 'value': total, 'error': error})
            out[i] = total
        return out[0], out[1]

    def evaluate(self, omegas):
        """
        Transforms at the given positive frequencies.

        Returns
        -------
        numpy.ndarray, numpy.ndarray
          Ic and Is (the latter zero when the sine part is not requested).
        """

        # Checks
        om = np.asarray(omegas, dtype=float).ravel()
        if np.any(om < OMEGA_MIN) or np.any(om > OMEGA_MAX):
            raise ResolutionError("Frequencies must lie in [{:g}, {:g}].".format(OMEGA_MIN, OMEGA_MAX))

        # Initializations
        r_nodes = 1. / om
        knots = np.unique(np.concatenate([r_nodes, [1.]]))
        grid = [knots[0]]
        for b in knots[1:]:
            n = int(np.ceil(np.log10(b / grid[-1])))
            if n > 1:
                grid.extend(np.geomspace(grid[-1], b, n + 1)[1:-1])
            grid.append(b)
        grid = np.array(grid)

        pieces = np.array([self._moments(a, b) for a, b in zip(grid[:-1], grid[1:])])
        partial = np.vstack([np.zeros(KMAX + 1), np.cumsum(pieces, axis=0)])
        i1 = int(np.argmin(np.abs(grid - 1.)))
        anchored = partial[:, :2] - partial[i1, :2]
        moments = partial + self._base_moments(grid[0])

        Ic = np.empty(om.size)
        Is = np.zeros(om.size)
        for j, omega in enumerate(om):
            r0 = r_nodes[j]
            i = int(np.argmin(np.abs(grid - r0)))
            m = moments[i]
            tail = self.tail0 - anchored[i, 0]
            cos_tail, sin_tail = self._oscillatory(r0, omega, tail)

            signs = (-1.) ** (_EVEN // 2 + 1)
            inner = float(np.sum(signs * omega ** _EVEN / factorial(_EVEN) * m[_EVEN]))
            Ic[j] = inner + tail - cos_tail
            if not self.with_odd:
                continue

            signs = (-1.) ** ((_ODD - 1) // 2)
            inner = float(np.sum(signs * omega ** _ODD / factorial(_ODD) * m[_ODD]))
            first = anchored[i, 1]
            if self.case == CASE1:
                inner += omega * (self.head1 + first)
                outer = 0.
            elif self.case == CASE2:
                inner += omega * first if r0 > 1. else 0.
                outer = -first if r0 < 1. else 0.
            else:
                outer = self.tail1 - first
            Is[j] = inner + sin_tail - omega * outer
        return Ic, Is


def _paired_directions(spec):
    """Directions computed and their weights, opposite pairs merged when kappa is even."""
    M = spec.units.shape[0]
    if spec.symmetric_in_z:
        half = M // 2
        return list(range(half)), 2. * spec.weights[:half]
    return list(range(M)), spec.weights.copy()


class ExponentTable:
    """
    Characteristic exponent Psi_{t,s} tabulated on geometric frequency nodes and
    interpolated by cubic splines in log-log scale, direction by direction.

    Attributes
    ----------
    spec : FrozenKernelSpec
      Kernel.
    t, s : float
      Time window.
    nodes : numpy.ndarray
      Positive |omega| nodes.
    """

    def __init__(self, spec, t, s, nodes, kbar=None, quad: QuadratureConfig=DEFAULT_QUADRATURE):
        self.spec = spec
        self.t, self.s = float(t), float(s)
        self.kbar = spec.averaged(t, s) if kbar is None else kbar
        self.nodes = np.unique(np.asarray(nodes, dtype=float))
        if self.nodes.size < 4:
            raise ValueError("An exponent table needs at least 4 nodes.")
        self.members, self.member_weights = _paired_directions(spec)
        self.with_odd = not spec.symmetric_in_z

        x = np.log(self.nodes)
        self._log_ic, self._ratio, self._slopes = [], [], []
        for m in self.members:
            Ic, Is = RadialTransform(self.kbar.along(m), spec.profile, self.with_odd, quad).evaluate(self.nodes)
            if np.any(Ic <= 0):
                raise NumericError("Non-positive cosine transform along direction {}.".format(m))
            y = np.log(Ic)
            self._log_ic.append(CubicSpline(x, y))
            self._ratio.append(CubicSpline(x, Is / Ic) if self.with_odd else None)
            self._slopes.append(((y[1] - y[0]) / (x[1] - x[0]), (y[-1] - y[-2]) / (x[-1] - x[-2])))
        logger.debug("Exponent table of %s on [%g, %g]: %d nodes x %d directions",
                     spec.name, self.nodes[0], self.nodes[-1], self.nodes.size, len(self.members))

    def _cosine(self, k, a):
        x = np.log(a)
        lo, hi = np.log(self.nodes[0]), np.log(self.nodes[-1])
        spline = self._log_ic[k]
        inside = spline(np.clip(x, lo, hi))
        below = spline(lo) + self._slopes[k][0] * (x - lo)
        above = spline(hi) + self._slopes[k][1] * (x - hi)
        return np.exp(np.where(x < lo, below, np.where(x > hi, above, inside)))

    def __call__(self, xi):
        """
        Psi_{t,s} at frequency points xi, shape (...,) in d=1 or (..., 2) in d=2.
        """
        d = self.spec.d
        xi = np.asarray(xi, dtype=float)
        shape = xi.shape if d == 1 else xi.shape[:-1]
        pts = xi.reshape(-1, d)
        total = np.zeros(pts.shape[0], dtype=complex)
        lo, hi = np.log(self.nodes[0]), np.log(self.nodes[-1])
        for k, (m, weight) in enumerate(zip(self.members, self.member_weights)):
            omega = pts @ self.spec.units[m]
            a = np.abs(omega)
            nz = a > 0
            ic = np.zeros_like(a)
            ic[nz] = self._cosine(k, a[nz])
            part = -ic.astype(complex)
            if self.with_odd:
                ratio = np.zeros_like(a)
                ratio[nz] = self._ratio[k](np.clip(np.log(a[nz]), lo, hi))
                part = part + 1j * np.sign(omega) * ratio * ic
            total += weight * part
        return ((self.s - self.t) * total).reshape(shape)


@typechecked
def characteristic_exponent(spec: FrozenKernelSpec, t: Real, s: Real, xi,
                            quad: QuadratureConfig=DEFAULT_QUADRATURE):
    """
    Computes Psi_{t,s}(xi), the log characteristic function of the increment
    of the frozen process over [t, s], without interpolation.

    Parameters
    ----------
    spec : FrozenKernelSpec
      Kernel.
    t, s : float
      Times with t < s.
    xi : float or array_like
      One frequency (float in d=1, pair in d=2) or an array of them.

    Returns
    -------
    complex or numpy.ndarray of complex
    """

    # Checks
    if not s > t:
        raise ValueError("characteristic_exponent requires t < s.")

    # Initializations
    d = spec.d
    xi_arr = np.asarray(xi, dtype=float)
    single = xi_arr.size == d
    pts = xi_arr.reshape(-1, d)
    kbar = spec.averaged(t, s)
    members, weights = _paired_directions(spec)
    with_odd = not spec.symmetric_in_z
    total = np.zeros(pts.shape[0], dtype=complex)

    for m, weight in zip(members, weights):
        omega = pts @ spec.units[m]
        a = np.abs(omega)
        nz = a > 0
        if not np.any(nz):
            continue
        uniq, inv = np.unique(a[nz], return_inverse=True)
        Ic, Is = RadialTransform(kbar.along(m), spec.profile, with_odd, quad).evaluate(uniq)
        part = np.zeros(pts.shape[0], dtype=complex)
        part[nz] = -Ic[inv] + 1j * np.sign(omega[nz]) * Is[inv]
        total += weight * part

    psi = (float(s) - float(t)) * total
    return complex(psi[0]) if single else psi.reshape(xi_arr.shape[:-1] if d > 1 else xi_arr.shape)


# FREQUENCY CUTOFF

def _decay_curve(spec, t, s, quad, nodes):
    """Upper bound of Re Psi along the first axis, interpolated on `nodes`."""
    if spec.d == 1:
        table = ExponentTable(spec, t, s, nodes, quad=quad)
        return lambda R: float(table(np.array([R])).real[0])

    # In d >= 2 the kernel is bounded below by 1/kappa0 times the unit kernel
    unit = RadialTransform(lambda r: np.ones_like(np.asarray(r, dtype=float)), spec.profile, False, quad)
    Ic, _ = unit.evaluate(nodes)
    spline = CubicSpline(np.log(nodes), np.log(Ic))
    c = np.abs(spec.units[:, 0])
    lo, hi = np.log(nodes[0]), np.log(nodes[-1])

    def curve(R):
        a = R * c[c > 0]
        values = np.exp(spline(np.clip(np.log(a), lo, hi)))
        return -(s - t) / spec.kappa0 * float(np.sum(spec.weights[c > 0] * values))

    return curve


@typechecked
def frequency_cutoff(spec: FrozenKernelSpec, t: Real, s: Real, decay: Real=1e-16,
                     quad: QuadratureConfig=DEFAULT_QUADRATURE) -> float:
    """
    Smallest frequency Xi (up to bisection tolerance) with |exp Psi_{t,s}| <= decay
    on the boundary of the box [-Xi, Xi]^d.

    Raises
    ------
    ResolutionError
      When the exponent does not decay below the threshold up to 2^40.
    """
    target = np.log(decay)
    for top in (12, 26, 40):
        nodes = np.geomspace(2. ** -4, 2. ** top, top + 5)
        curve = _decay_curve(spec, t, s, quad, nodes)
        for k in range(-3, top + 1):
            if curve(2. ** k) <= target:
                lo, hi = 2. ** (k - 1), 2. ** k
                for _ in range(30):
                    mid = np.sqrt(lo * hi)
                    if curve(mid) <= target:
                        hi = mid
                    else:
                        lo = mid
                logger.debug("Frequency cutoff of %s on [%g, %g]: %.6g", spec.name, t, s, hi)
                return float(hi)
    raise ResolutionError("exp(Psi) does not fall below {:g} for |xi| <= 2^40.".format(decay))


@typechecked
def decay_at(spec: FrozenKernelSpec, t: Real, s: Real, xi_max: Real,
             quad: QuadratureConfig=DEFAULT_QUADRATURE) -> float:
    """Upper bound of |exp Psi_{t,s}| on the boundary of [-xi_max, xi_max]^d."""
    nodes = np.geomspace(min(2. ** -4, xi_max / 16.), xi_max * 1.01, 25)
    return float(np.exp(_decay_curve(spec, t, s, quad, nodes)(float(xi_max))))


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
