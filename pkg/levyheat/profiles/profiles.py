# Created on 2020/9/3

# This module is for radial scale functions phi: evaluation, inversion,
# case classification, scaling-bound checks and the comparison weight rho.

# Standard library imports
from dataclasses import FrozenInstanceError, dataclass, field
import logging
from numbers import Real
from typing import Callable, Optional, Sequence, Tuple, Union
import warnings

# Third party imports
import numpy as np
from scipy import optimize
from scipy.interpolate import PchipInterpolator
from typeguard import typechecked

# Local application imports
from ..exceptions import ConfigurationError, DomainError, ModelError, RangeError
from ..quadrature import (DEFAULT_QUADRATURE, Divergent, QuadratureConfig,
                          integrate_positive_axis, integrate_to_infinity,
                          integrate_to_zero, is_divergent)

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


CASE1 = 'Case1'
CASE2 = 'Case2'
CASE3 = 'Case3'

COMPENSATOR_NONE = 'None'
COMPENSATOR_TRUNCATED = 'Truncated'
COMPENSATOR_FULL = 'Full'

COMPENSATOR_OF_CASE = {CASE1: COMPENSATOR_NONE,
                       CASE2: COMPENSATOR_TRUNCATED,
                       CASE3: COMPENSATOR_FULL}

# Largest radius explored when inverting phi
R_MAX = 1e300


class ScalingProfile:
    """
    Radial scale function phi of a jump measure kappa/(|z|^d phi(|z|)).

    Attributes
    ----------
    beta1, beta2 : float
      Declared lower and upper scaling exponents.
    c1_phi, c2_phi : float
      Declared scaling constants.
    d : int
      Space dimension.
    case_tag : str
      One of 'Case1', 'Case2', 'Case3'.
    compensator_mode : str
      One of 'None', 'Truncated', 'Full', tied to case_tag.
    family : str
      Name of the built-in family, or 'callable'.
    params : dict
      Parameters of the family (used for serialization).
    name : str
      Name or nickname of the profile.

    Notes
    -----
      Profiles are immutable once built; case_tag and compensator_mode are
      derived from phi at construction.
    """

    def __init__(self, phi, beta1, beta2, c1_phi=1., c2_phi=1., d=1, dphi=None,
                 family="callable", params=None, name="", case_tag=None,
                 quad=DEFAULT_QUADRATURE, validate=True):
        """
        Initializes the profile, checks normalization and monotonicity,
        and classifies the case when it is not given.
        """

        # Checks
        if not callable(phi):
            raise TypeError("phi must be callable.")
        if not isinstance(d, (int, np.integer)) or d < 1:
            raise ValueError("Dimension d must be a positive integer.")
        if not (0 < beta1 <= beta2):
            raise ValueError("Scaling exponents must satisfy 0 < beta1 <= beta2.")
        if not (0 < c1_phi <= 1 <= c2_phi):
            raise ValueError("Scaling constants must satisfy 0 < c1_phi <= 1 <= c2_phi.")

        self._phi = phi
        self._dphi = dphi
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.c1_phi = float(c1_phi)
        self.c2_phi = float(c2_phi)
        self.d = int(d)
        self.family = family
        self.params = dict(params or {})
        self.name = name if name else family

        if validate:
            self._check_shape()
            c0 = c0_phi(self, quad)
            if is_divergent(c0):
                raise ModelError("Integral of (r^2 ^ 1)/(r phi(r)) diverges for profile {}.".format(self.name))
            self.c0_phi = c0
        else:
            self.c0_phi = None

        if case_tag is None:
            case_tag = classify_case(self, quad)
        if case_tag not in COMPENSATOR_OF_CASE:
            raise ValueError("Unknown case tag {}.".format(case_tag))
        self.case_tag = case_tag
        self.compensator_mode = COMPENSATOR_OF_CASE[case_tag]
        self._frozen = True

    def __setattr__(self, key, value):
        if getattr(self, '_frozen', False):
            raise FrozenInstanceError("cannot assign to field {!r} of ScalingProfile {}".format(key, self.name))
        object.__setattr__(self, key, value)

    def __repr__(self):
        return "ScalingProfile({}, d={}, {})".format(self.name, self.d, self.case_tag)

    def _check_shape(self):
        if abs(float(self._phi(np.array(1.))) - 1.) > 1e-12:
            raise ModelError("Profile {} is not normalized: phi(1) != 1.".format(self.name))
        if float(self._phi(np.array(0.))) != 0.:
            raise ModelError("Profile {} does not vanish at 0.".format(self.name))
        r = np.logspace(-12, 6, 181)
        values = self._phi(r)
        if not np.all(np.isfinite(values)) or np.any(np.diff(values) <= 0) or np.any(values <= 0):
            raise ModelError("Profile {} is not strictly increasing and positive.".format(self.name))

    # EVALUATION

    def phi(self, r):
        """Evaluates phi on a scalar or an array of radii."""
        return self._phi(np.asarray(r, dtype=float))

    def dphi(self, r):
        """
        Derivative of phi, analytic when the family provides it,
        centered differences otherwise.
        """
        r = np.asarray(r, dtype=float)
        if self._dphi is not None:
            return self._dphi(r)
        h = 1e-6 * r
        return (self._phi(r + h) - self._phi(r - h)) / (2. * h)

    def inverse(self, t):
        """
        Inverts phi at a scalar t >= 0 by bisection.

        Raises
        ------
        DomainError
          When t is negative or not finite.
        RangeError
          When t lies outside the numeric range of phi.
        """
        t = float(t)
        if not np.isfinite(t) or t < 0:
            raise DomainError("phi inverse requires a finite t >= 0, got {}.".format(t))
        if t == 0.:
            return 0.
        if t == 1.:
            return 1.

        phi = lambda r: float(self._phi(np.array(r)))
        if t > 1.:
            lo, hi = 1., 2.
            while phi(hi) < t:
                lo, hi = hi, 2. * hi
                if hi > R_MAX or not np.isfinite(phi(hi)):
                    raise RangeError("t={} is beyond the range of phi on [0, {}].".format(t, R_MAX))
        else:
            lo, hi = 0.5, 1.
            while phi(lo) > t:
                lo, hi = 0.5 * lo, lo
                if lo < 1e-300:
                    raise RangeError("t={} is below the numeric range of phi.".format(t))

        if phi(lo) == t:
            return lo
        if phi(hi) == t:
            return hi
        return optimize.bisect(lambda r: phi(r) - t, lo, hi, xtol=1e-16 * lo,
                               rtol=4 * np.finfo(float).eps, maxiter=400)

    def inverse_values(self, t):
        """Vectorized version of `inverse`."""
        t = np.asarray(t, dtype=float)
        out = np.array([self.inverse(v) for v in t.ravel()])
        return out.reshape(t.shape)

    def compensator(self, r):
        """Factor c(r) with z^(phi) = c(|z|) z."""
        r = np.asarray(r, dtype=float)
        if self.compensator_mode == COMPENSATOR_NONE:
            return np.zeros_like(r)
        if self.compensator_mode == COMPENSATOR_TRUNCATED:
            return (r <= 1.).astype(float)
        return np.ones_like(r)

    def gamma(self, i, r):
        """
        Weights gamma^(0) = r^2 ^ 1 and gamma^(1), the latter depending on the case.
        """
        r = np.asarray(r, dtype=float)
        if i == 0:
            return np.minimum(r * r, 1.)
        if i == 1:
            if self.case_tag == CASE1:
                return np.minimum(r, 1.)
            if self.case_tag == CASE2:
                return np.minimum(r * r, 1.)
            return np.minimum(r * r, r)
        raise DomainError("gamma index must be 0 or 1, got {}.".format(i))

    def rescaled(self, lam):
        """
        Returns the profile u -> phi(u phi^{-1}(lam)) / lam.

        The case tag is invariant under this rescaling and is carried over.
        """
        if lam <= 0:
            raise DomainError("Rescaling factor must be positive.")
        a = self.inverse(lam)
        base = self

        def phi_lam(u):
            return base.phi(u * a) / lam

        def dphi_lam(u):
            return base.dphi(u * a) * a / lam

        params = {'base': self.to_config() if self.family not in ('callable', 'rescaled') else None,
                  'lam': float(lam)}
        return ScalingProfile(phi_lam, self.beta1, self.beta2, self.c1_phi, self.c2_phi, self.d,
                              dphi=dphi_lam, family='rescaled', params=params,
                              name="{}@{:g}".format(self.name, lam), case_tag=self.case_tag,
                              validate=False)

    # SERIALIZATION

    def to_config(self):
        """Returns the dictionary {family, params, d, name} describing the profile."""
        if self.family in ('callable', 'rescaled'):
            raise ConfigurationError("Profile {} of family {} cannot be serialized.".format(self.name, self.family))
        return {'family': self.family, 'params': dict(self.params), 'd': self.d, 'name': self.name}

    def plot(self, r_min=1e-3, r_max=1e3, num=200, ax=None):
        """Plots phi in log-log scale."""
        import matplotlib.pyplot as plt
        r = np.logspace(np.log10(r_min), np.log10(r_max), num)
        if ax is None:
            _, ax = plt.subplots(figsize=(8, 5))
        ax.loglog(r, self.phi(r), label=self.name)
        ax.set_xlabel("r")
        ax.set_ylabel("phi(r)")
        ax.legend()
        return ax


# BUILT-IN FAMILIES

@typechecked
def power_law(alpha: Real, d: int=1, name: str="") -> ScalingProfile:
    """
    Profile phi(r) = r^alpha, alpha in (0,2).

    Examples
    --------
      >>> eval_phi(power_law(1.5), 4.)
      8.0
    """
    if not (0 < alpha < 2):
        raise ValueError("alpha must lie in (0,2).")
    a = float(alpha)
    return ScalingProfile(lambda r: r ** a, a, a, 1., 1., d,
                          dphi=lambda r: a * r ** (a - 1.),
                          family='power_law', params={'alpha': a},
                          name=name or "r^{:g}".format(a))


@typechecked
def piecewise_power(alpha: Real, beta: Real, d: int=1, name: str="") -> ScalingProfile:
    """
    Profile phi(r) = r^alpha for r <= 1 and r^beta for r > 1.
    """
    if not (0 < alpha < 2) or beta <= 0:
        raise ValueError("Require alpha in (0,2) and beta > 0.")
    a, b = float(alpha), float(beta)

    def phi(r):
        return np.where(r <= 1., r ** a, r ** b)

    def dphi(r):
        return np.where(r <= 1., a * r ** (a - 1.), b * r ** (b - 1.))

    return ScalingProfile(phi, a, max(a, b), 1., 1., d, dphi=dphi,
                          family='piecewise_power', params={'alpha': a, 'beta': b},
                          name=name or "r^{:g}|r^{:g}".format(a, b))


def _mixture_arrays(alphas, weights):
    alphas = np.asarray(alphas, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if alphas.shape != weights.shape or alphas.size == 0:
        raise ValueError("alphas and weights must be non-empty and of equal length.")
    if np.any(weights <= 0) or np.any(alphas <= 0) or np.any(alphas >= 2):
        raise ValueError("Require positive weights and exponents in (0,2).")
    return alphas, weights / weights.sum()


@typechecked
def power_mixture(alphas: Union[Sequence[float], np.ndarray], weights: Union[Sequence[float], np.ndarray],
                  d: int=1, name: str="") -> ScalingProfile:
    """
    Profile phi(r) = sum_i w_i r^{alpha_i}, a discrete mixture of powers (weights normalized).
    """
    exps, ws = _mixture_arrays(alphas, weights)

    def phi(r):
        r = np.asarray(r, dtype=float)
        return np.sum(ws * r[..., None] ** exps, axis=-1)

    def dphi(r):
        r = np.asarray(r, dtype=float)
        return np.sum(ws * exps * r[..., None] ** (exps - 1.), axis=-1)

    return ScalingProfile(phi, exps.min(), exps.max(), 1., 1., d, dphi=dphi,
                          family='power_mixture',
                          params={'alphas': exps.tolist(), 'weights': ws.tolist()},
                          name=name or "mixture")


@typechecked
def harmonic_mixture(alphas: Union[Sequence[float], np.ndarray], weights: Union[Sequence[float], np.ndarray],
                     d: int=1, name: str="") -> ScalingProfile:
    """
    Profile 1/phi(r) = sum_i w_i r^{-alpha_i}, the scale of a sum of independent
    stable-like jump measures (weights normalized).
    """
    exps, ws = _mixture_arrays(alphas, weights)

    def phi(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide='ignore'):
            inv = np.sum(ws * r[..., None] ** (-exps), axis=-1)
            return np.where(r > 0, 1. / inv, 0.)

    def dphi(r):
        r = np.asarray(r, dtype=float)
        inv = np.sum(ws * r[..., None] ** (-exps), axis=-1)
        dinv = -np.sum(ws * exps * r[..., None] ** (-exps - 1.), axis=-1)
        return -dinv / inv ** 2

    return ScalingProfile(phi, exps.min(), exps.max(), 1., 1., d, dphi=dphi,
                          family='harmonic_mixture',
                          params={'alphas': exps.tolist(), 'weights': ws.tolist()},
                          name=name or "harmonic mixture")


@typechecked
def log_linear(beta: Real=2., d: int=1, name: str="") -> ScalingProfile:
    """
    Profile phi(r) = r (1 + log(1/r)) for r <= 1 and r^beta for r > 1.

    Notes
    -----
      Near 0 the profile behaves like r log(1/r), a borderline case in which
      the gradient condition of the heat kernel fails for logarithmic moduli.
      Lower scaling holds with exponent 0.9 and constant 0.24.
    """
    if beta <= 1:
        raise ValueError("beta must exceed 1.")
    b = float(beta)

    def phi(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide='ignore', invalid='ignore'):
            small = np.where(r > 0, r * (1. + np.log(1. / np.where(r > 0, r, 1.))), 0.)
        return np.where(r <= 1., small, r ** b)

    def dphi(r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= 1., np.log(1. / r), b * r ** (b - 1.))

    return ScalingProfile(phi, 0.9, max(1., b), 0.24, 1., d, dphi=dphi,
                          family='log_linear', params={'beta': b},
                          name=name or "r log(1/r)|r^{:g}".format(b))


@typechecked
def tabulated(r_knots: Union[Sequence[float], np.ndarray], phi_knots: Union[Sequence[float], np.ndarray],
              d: int=1, name: str="") -> ScalingProfile:
    """
    Profile interpolated monotonically (PCHIP) in log-log coordinates through
    knots (r_i, phi_i), extended by powers beyond the first and last knots.

    The knots must contain the normalization point (1, 1).
    """

    # Checks
    rk = np.asarray(r_knots, dtype=float)
    pk = np.asarray(phi_knots, dtype=float)
    if rk.size < 3 or rk.shape != pk.shape:
        raise ValueError("At least three knots of equal length are needed.")
    if np.any(np.diff(rk) <= 0) or np.any(np.diff(pk) <= 0) or rk[0] <= 0:
        raise ValueError("Knots must be positive and strictly increasing.")
    if not np.any(np.isclose(rk, 1.) & np.isclose(pk, 1.)):
        raise ValueError("Knots must contain (1, 1).")

    # Initializations
    lr, lp = np.log(rk), np.log(pk)
    interp = PchipInterpolator(lr, lp)
    slopes = np.diff(lp) / np.diff(lr)
    s_lo, s_hi = slopes[0], slopes[-1]

    def phi(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide='ignore'):
            x = np.log(np.where(r > 0, r, 1.))
        y = np.where(x < lr[0], lp[0] + s_lo * (x - lr[0]),
                     np.where(x > lr[-1], lp[-1] + s_hi * (x - lr[-1]), interp(np.clip(x, lr[0], lr[-1]))))
        return np.where(r > 0, np.exp(y), 0.)

    return ScalingProfile(phi, slopes.min(), slopes.max(), 1., 1., d, family='tabulated',
                          params={'r': rk.tolist(), 'phi': pk.tolist()},
                          name=name or "tabulated")


@typechecked
def from_callable(phi: Callable, beta1: Real, beta2: Real, c1_phi: Real=1., c2_phi: Real=1.,
                  d: int=1, dphi: Optional[Callable]=None, name: str="") -> ScalingProfile:
    """Wraps a user callable with declared (never trusted) scaling constants."""
    return ScalingProfile(phi, beta1, beta2, c1_phi, c2_phi, d, dphi=dphi, name=name or "callable")


_FAMILIES = {
    'power_law': lambda p, d, n: power_law(p['alpha'], d, n),
    'piecewise_power': lambda p, d, n: piecewise_power(p['alpha'], p['beta'], d, n),
    'power_mixture': lambda p, d, n: power_mixture(p['alphas'], p['weights'], d, n),
    'harmonic_mixture': lambda p, d, n: harmonic_mixture(p['alphas'], p['weights'], d, n),
    'log_linear': lambda p, d, n: log_linear(p.get('beta', 2.), d, n),
    'tabulated': lambda p, d, n: tabulated(p['r'], p['phi'], d, n),
}


@typechecked
def profile_from_config(config: dict) -> ScalingProfile:
    """
    Builds a profile from {family, params, d, name}.

    Raises
    ------
    ConfigurationError
      When the family is unknown or parameters are missing.
    """
    family = config.get('family')
    if family not in _FAMILIES:
        raise ConfigurationError("Unknown profile family {!r}.".format(family))
    try:
        return _FAMILIES[family](config.get('params', {}), int(config.get('d', 1)), config.get('name', ""))
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigurationError("Invalid parameters for profile family {}: {}".format(family, err))


# OPERATIONS

@typechecked
def eval_phi(p: ScalingProfile, r: Union[Real, np.ndarray]):
    """
    Evaluates phi(r).

    Raises
    ------
    DomainError
      When r is negative or not finite.
    """
    arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError("eval_phi requires finite r >= 0.")
    values = p.phi(arr)
    if np.ndim(r) == 0:
        return float(values)
    return values


@typechecked
def eval_phi_inverse(p: ScalingProfile, t: Real) -> float:
    """
    Returns r with phi(r) = t, |phi(r) - t| <= 1e-12 max(1,t).

    Examples
    --------
      >>> eval_phi_inverse(power_law(1.5), 8.)
      4.0
    """
    return p.inverse(t)


@typechecked
def c0_phi(p: ScalingProfile, quad: QuadratureConfig=DEFAULT_QUADRATURE):
    """Integral of (r^2 ^ 1)/(r phi(r)) over (0, inf), or `Divergent`."""
    return integrate_positive_axis(lambda r: min(r * r, 1.) / (r * float(p.phi(r))), (1.,), quad, "c0_phi")


@typechecked
def classify_case(p: ScalingProfile, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> str:
    """
    Classifies phi by the integrability of 1/phi near 0 and near infinity.

    Returns
    -------
    str
      'Case1' if the integral of 1/phi converges at 0, 'Case2' if it diverges at
      both ends, 'Case3' if it diverges at 0 and converges at infinity.

    Raises
    ------
    IndeterminateError
      When a partial-integral series is inconclusive.
    """
    inv = lambda r: 1. / float(p.phi(r))
    near_zero = integrate_to_zero(inv, 1., quad, "int_0^1 dr/phi")
    if not is_divergent(near_zero):
        return CASE1
    near_infinity = integrate_to_infinity(inv, 1., quad, "int_1^inf dr/phi")
    if is_divergent(near_infinity):
        return CASE2
    return CASE3


@dataclass
class BoundReport:
    """
    Outcome of the lattice check of the two scaling inequalities.

    Attributes
    ----------
    passed : bool
    lower_ratio : float
      Smallest observed phi(R)/phi(r) divided by c1 (R/r)^beta1 over pairs with R <= 1.
    upper_ratio : float
      Largest observed phi(R)/phi(r) divided by c2 (R/r)^beta2.
    lower_witness, upper_witness : tuple
      Pairs (r, R) attaining the worst ratios.
    n_pairs : int
    """
    passed: bool
    lower_ratio: float
    upper_ratio: float
    lower_witness: Tuple[float, float]
    upper_witness: Tuple[float, float]
    n_pairs: int
    slack: float = 1e-9


def default_lattice(r_min=1e-6, r_max=1e3, per_decade=4):
    """All pairs r < R on a geometric grid."""
    n = int(round(np.log10(r_max / r_min) * per_decade)) + 1
    r = np.logspace(np.log10(r_min), np.log10(r_max), n)
    i, j = np.triu_indices(n, k=1)
    return np.column_stack([r[i], r[j]])


@typechecked
def verify_scaling_bounds(p: ScalingProfile, lattice: Optional[np.ndarray]=None, slack: Real=1e-9) -> BoundReport:
    """
    Checks c1 (R/r)^beta1 <= phi(R)/phi(r) (for R <= 1) and
    phi(R)/phi(r) <= c2 (R/r)^beta2 (all r < R) on a lattice of pairs.

    Parameters
    ----------
    p : ScalingProfile
      Profile with declared constants.
    lattice : numpy.ndarray of shape (n, 2), optional
      Pairs (r, R) with r < R; defaults to 9 decades, 4 points per decade.
    slack : float
      Relative slack tolerated before declaring a violation.

    Returns
    -------
    BoundReport
    """

    # Initializations
    if lattice is None:
        lattice = default_lattice()
    lattice = np.asarray(lattice, dtype=float)
    r, R = lattice[:, 0], lattice[:, 1]
    if np.any(r >= R) or np.any(r <= 0):
        raise ValueError("Lattice pairs must satisfy 0 < r < R.")

    ratio = p.phi(R) / p.phi(r)
    upper = ratio / (p.c2_phi * (R / r) ** p.beta2)
    iu = int(np.argmax(upper))

    low_mask = R <= 1.
    if np.any(low_mask):
        lower = ratio[low_mask] / (p.c1_phi * (R[low_mask] / r[low_mask]) ** p.beta1)
        il = int(np.argmin(lower))
        lower_ratio = float(lower[il])
        lower_witness = (float(r[low_mask][il]), float(R[low_mask][il]))
    else:
        lower_ratio, lower_witness = 1., (np.nan, np.nan)

    passed = lower_ratio >= 1. - slack and float(upper[iu]) <= 1. + slack
    if not passed:
        logger.info("Scaling bounds of %s violated: lower %.6g at %s, upper %.6g at %s",
                    p.name, lower_ratio, lower_witness, upper[iu], (r[iu], R[iu]))
    return BoundReport(passed, lower_ratio, float(upper[iu]), lower_witness,
                       (float(r[iu]), float(R[iu])), int(r.size), float(slack))


@typechecked
def compute_A_phi(p: ScalingProfile, i: int, lambda_grid: Optional[Union[Sequence[float], np.ndarray]]=None,
                  quad: QuadratureConfig=DEFAULT_QUADRATURE):
    """
    Computes sup over lambda of the integral of phi(lambda) gamma^(i)(r) / (r phi(lambda r)).

    Parameters
    ----------
    p : ScalingProfile
      Profile.
    i : int
      0 or 1.
    lambda_grid : sequence of float, optional
      Values in (0,1]; defaults to 64 log-spaced points in [1e-12, 1].
    quad : QuadratureConfig
      Quadrature settings; `growth_factor` and `growth_decades` judge the sup.

    Returns
    -------
    float or Divergent

    Raises
    ------
    DomainError
      When i is not 0 or 1.

    Notes
    -----
      For phi(r) = r^alpha, the value for i=0 is 1/(2-alpha) + 1/alpha.
    """

    # Checks
    if i not in (0, 1):
        raise DomainError("compute_A_phi requires i in {{0,1}}, got {}.".format(i))

    # Initializations
    grid = np.logspace(-12, 0, 64) if lambda_grid is None else lambda_grid
    lams = np.unique(np.asarray(grid, dtype=float))[::-1]
    if np.any(lams <= 0) or np.any(lams > 1):
        raise DomainError("lambda_grid must lie in (0,1].")

    values = []
    for lam in lams:
        phi_lam = float(p.phi(lam))

        def integrand(r, lam=lam, phi_lam=phi_lam):
            return phi_lam * float(p.gamma(i, r)) / (r * float(p.phi(lam * r)))

        value = integrate_positive_axis(integrand, (1., 1. / lam), quad, "A^({})".format(i))
        if is_divergent(value):
            return value
        values.append(value)
        if value > quad.ceiling:
            return Divergent("A^({})".format(i), value, values, 'ceiling')
    values = np.asarray(values)
    running = np.maximum.accumulate(values)

    # Judge the growth of the running sup decade by decade
    decades = np.arange(0, int(np.floor(-np.log10(lams[-1]) + 1e-9)) + 1)
    sup_at = []
    for k in decades:
        idx = np.nonzero(lams >= 10. ** (-k) * (1 - 1e-12))[0]
        sup_at.append(running[idx[-1]])
    sup_at = np.asarray(sup_at)
    m = quad.growth_decades
    if sup_at.size > m:
        growth = sup_at[-m:] / sup_at[-m-1:-1]
        if np.all(growth >= quad.growth_factor):
            return Divergent("A^({})".format(i), running[-1], np.diff(sup_at), 'sup')
    return float(running[-1])


@typechecked
def rho(p: ScalingProfile, t: Real, r: Union[Real, np.ndarray]):
    """
    Comparison weight rho_phi(t, x) = 1/(t phi^{-1}(t)^d + |x|^d phi(|x|)), with r = |x|.

    Raises
    ------
    DomainError
      When t <= 0.
    """
    if t <= 0:
        raise DomainError("rho requires t > 0.")
    rr = np.asarray(r, dtype=float)
    if np.any(rr < 0):
        raise DomainError("rho requires r >= 0.")
    a = p.inverse(t)
    values = 1. / (t * a ** p.d + rr ** p.d * p.phi(rr))
    if np.ndim(r) == 0:
        return float(values)
    return values


@typechecked
def comparability_constant(p: ScalingProfile, t_grid: Optional[Union[Sequence[float], np.ndarray]]=None,
                           r_grid: Optional[Union[Sequence[float], np.ndarray]]=None) -> float:
    """
    Smallest C with rho_phi(t,x) and 1/((phi^{-1}(t)+|x|)^d phi(phi^{-1}(t)+|x|))
    within a factor C of each other over the lattice.
    """
    ts = np.logspace(-6, 0, 13) if t_grid is None else np.asarray(t_grid, dtype=float)
    rs = np.concatenate([[0.], np.logspace(-6, 2, 33)]) if r_grid is None else np.asarray(r_grid, dtype=float)
    worst = 1.
    for t in ts:
        a = p.inverse(t)
        s = a + rs
        ratio = rho(p, float(t), rs) * s ** p.d * p.phi(s)
        worst = max(worst, float(np.max(ratio)), float(np.max(1. / ratio)))
    return worst


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
