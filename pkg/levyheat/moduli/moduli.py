# Created on 2020/9/4

# This module is for continuity moduli ell: class membership, the integrals
# Gamma_ell and M^phi_ell, Potter bounds and the convolution weight h^ell_phi.

# Standard library imports
from dataclasses import dataclass
import logging
from numbers import Real
from typing import Optional, Sequence, Tuple, Union

# Third party imports
import numpy as np
from scipy.special import gamma as gamma_function
from typeguard import typechecked

# Local application imports
from ..exceptions import ConfigurationError, DivergenceError, DomainError, IndeterminateError
from ..profiles import ScalingProfile, rho
from ..quadrature import (DEFAULT_QUADRATURE, QuadratureConfig, integrate_positive_axis,
                          integrate_to_zero, is_divergent, quad_linear)

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


SLOWLY_VARYING = 'S0'
DINI = 'D0'
REGULARLY_VARYING = 'R'


class Modulus:
    """
    Continuity modulus ell on (0,1], extended by ell(t) = ell(1) for t >= 1.

    Attributes
    ----------
    class_tag : frozenset of str
      Claimed classes among 'S0' (slowly varying), 'D0' (Dini) and 'R' (regularly varying).
    alpha : float or None
      Index of regular variation when 'R' is claimed.
    family : str
      Name of the built-in family, or 'callable'.
    params : dict
      Parameters of the family.
    name : str
      Name or nickname given to the modulus.
    """

    def __init__(self, ell, class_tag=(), alpha=None, family="callable", params=None, name=""):
        if not callable(ell):
            raise TypeError("ell must be callable.")
        tags = frozenset(class_tag)
        if not tags <= {SLOWLY_VARYING, DINI, REGULARLY_VARYING}:
            raise ValueError("Unknown class tags {}.".format(sorted(tags)))
        if REGULARLY_VARYING in tags and alpha is None:
            raise ValueError("A regularly varying modulus needs its index alpha.")
        self._ell = ell
        self.class_tag = tags
        self.alpha = None if alpha is None else float(alpha)
        self.family = family
        self.params = dict(params or {})
        self.name = name if name else family

    def __repr__(self):
        return "Modulus({}, {})".format(self.name, sorted(self.class_tag))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        one = float(self._ell(np.array(1.)))
        inside = self._ell(np.clip(t, np.finfo(float).tiny, 1.))
        values = np.where(t >= 1., one, inside)
        if values.ndim == 0:
            return float(values)
        return values

    def to_config(self):
        """Returns the dictionary {family, params, name} describing the modulus."""
        if self.family in ('callable', 'composite'):
            raise ConfigurationError("Modulus {} cannot be serialized.".format(self.name))
        params = {k: (v.to_config() if isinstance(v, Modulus) else v) for k, v in self.params.items()}
        return {'family': self.family, 'params': params, 'name': self.name}


# BUILT-IN FAMILIES

@typechecked
def power(eta: Real, name: str="") -> Modulus:
    """Modulus ell(t) = t^eta, eta >= 0."""
    if eta < 0:
        raise ValueError("eta must be non-negative.")
    e = float(eta)
    tags = {REGULARLY_VARYING, DINI} if e > 0 else {REGULARLY_VARYING, SLOWLY_VARYING}
    return Modulus(lambda t: t ** e, tags, alpha=e, family='power', params={'eta': e},
                   name=name or "t^{:g}".format(e))


@typechecked
def log_power(a: Real, name: str="") -> Modulus:
    """
    Modulus ell(t) = (log(1 + 1/t))^a, slowly varying; Dini when a < -1.
    """
    a = float(a)
    tags = {SLOWLY_VARYING, REGULARLY_VARYING}
    if a < -1:
        tags.add(DINI)
    return Modulus(lambda t: np.log1p(1. / t) ** a, tags, alpha=0., family='log_power',
                   params={'a': a}, name=name or "log(1+1/t)^{:g}".format(a))


@typechecked
def constant(c: Real=1., name: str="") -> Modulus:
    """Constant modulus, slowly varying but not Dini."""
    if c <= 0:
        raise ValueError("c must be positive.")
    c = float(c)
    return Modulus(lambda t: np.full_like(np.asarray(t, dtype=float), c), {SLOWLY_VARYING, REGULARLY_VARYING},
                   alpha=0., family='constant', params={'c': c}, name=name or "{:g}".format(c))


def _combined_tags(m1, m2, alpha):
    tags = set()
    if SLOWLY_VARYING in m1.class_tag and SLOWLY_VARYING in m2.class_tag:
        tags.add(SLOWLY_VARYING)
    if REGULARLY_VARYING in m1.class_tag and REGULARLY_VARYING in m2.class_tag:
        tags.add(REGULARLY_VARYING)
    else:
        alpha = None
    return tags, alpha


@typechecked
def product(m1: Modulus, m2: Modulus, name: str="") -> Modulus:
    """Product modulus ell1 ell2."""
    alpha = (m1.alpha or 0.) + (m2.alpha or 0.)
    tags, alpha = _combined_tags(m1, m2, alpha)
    if DINI in m1.class_tag and DINI in m2.class_tag:
        tags.add(DINI)
    return Modulus(lambda t: m1(t) * m2(t), tags, alpha=alpha, family='product',
                   params={'m1': m1, 'm2': m2}, name=name or "({})({})".format(m1.name, m2.name))


@typechecked
def maximum(m1: Modulus, m2: Modulus, name: str="") -> Modulus:
    """Pointwise maximum ell1 v ell2."""
    alpha = None if m1.alpha is None or m2.alpha is None else min(m1.alpha, m2.alpha)
    tags, alpha = _combined_tags(m1, m2, alpha)
    if DINI in m1.class_tag and DINI in m2.class_tag:
        tags.add(DINI)
    return Modulus(lambda t: np.maximum(m1(t), m2(t)), tags, alpha=alpha, family='maximum',
                   params={'m1': m1, 'm2': m2}, name=name or "{} v {}".format(m1.name, m2.name))


@typechecked
def scaled(m: Modulus, c: Real, name: str="") -> Modulus:
    """Modulus c ell."""
    if c <= 0:
        raise ValueError("c must be positive.")
    c = float(c)
    return Modulus(lambda t: c * m(t), m.class_tag, alpha=m.alpha, family='scaled',
                   params={'m': m, 'c': c}, name=name or "{:g} {}".format(c, m.name))


@typechecked
def squared(m: Modulus, name: str="") -> Modulus:
    """Modulus ell^2, the oscillation bound of a coefficient with modulus ell."""
    alpha = None if m.alpha is None else 2. * m.alpha
    return Modulus(lambda t: m(t) ** 2, m.class_tag, alpha=alpha, family='squared',
                   params={'m': m}, name=name or "({})^2".format(m.name))


@typechecked
def composite_phi(m: Modulus, p: ScalingProfile, name: str="") -> Modulus:
    """
    Modulus ell_phi = ell o phi^{-1}; slowly varying and Dini classes carry over.
    """
    tags = set(m.class_tag) & {SLOWLY_VARYING, DINI}
    alpha = None
    if REGULARLY_VARYING in m.class_tag and p.beta1 == p.beta2:
        tags.add(REGULARLY_VARYING)
        alpha = m.alpha / p.beta1

    def ell(t):
        t = np.asarray(t, dtype=float)
        return m(p.inverse_values(t))

    return Modulus(ell, tags, alpha=alpha, family='composite', params={},
                   name=name or "{} o phi^-1".format(m.name))


_FAMILIES = ('power', 'log_power', 'constant', 'product', 'maximum', 'scaled', 'squared')


@typechecked
def modulus_from_config(config: dict) -> Modulus:
    """
    Builds a modulus from {family, params, name}; nested moduli are nested dictionaries.

    Raises
    ------
    ConfigurationError
      When the family is unknown or parameters are missing.
    """
    family = config.get('family')
    params = config.get('params', {})
    name = config.get('name', "")
    try:
        if family == 'power':
            return power(params['eta'], name)
        if family == 'log_power':
            return log_power(params['a'], name)
        if family == 'constant':
            return constant(params.get('c', 1.), name)
        if family == 'product':
            return product(modulus_from_config(params['m1']), modulus_from_config(params['m2']), name)
        if family == 'maximum':
            return maximum(modulus_from_config(params['m1']), modulus_from_config(params['m2']), name)
        if family == 'scaled':
            return scaled(modulus_from_config(params['m']), params['c'], name)
        if family == 'squared':
            return squared(modulus_from_config(params['m']), name)
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigurationError("Invalid parameters for modulus family {}: {}".format(family, err))
    raise ConfigurationError("Unknown modulus family {!r}, expected one of {}.".format(family, _FAMILIES))


# OPERATIONS

@typechecked
def gamma_ell(m: Modulus, t: Real, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> float:
    """
    Computes Gamma_ell(t), the integral of ell(s)/s over (0, t].

    Raises
    ------
    DomainError
      When t <= 0.
    DivergenceError
      When the Dini integral diverges (e.g. ell = 1).

    Examples
    --------
      >>> gamma_ell(power(0.5), 1.)
      2.0
    """
    if t <= 0:
        raise DomainError("gamma_ell requires t > 0.")
    value = integrate_to_zero(lambda s: m(s) / s, t, quad, "Gamma_ell")
    if is_divergent(value):
        raise DivergenceError("Dini integral of {} diverges.".format(m.name),
                              diagnostics={'increments': value.increments, 'reason': value.reason})
    return value


@typechecked
def ell_phi(m: Modulus, p: ScalingProfile, t: Real) -> float:
    """Returns ell(phi^{-1}(t))."""
    if t <= 0:
        raise DomainError("ell_phi requires t > 0.")
    return m(p.inverse(t))


@typechecked
def M_phi_ell(m: Modulus, p: ScalingProfile, t: Real, quad: QuadratureConfig=DEFAULT_QUADRATURE):
    """
    Computes M^phi_ell(t), the Stieltjes integral over (0,t] of
    (1/r)(ell(r)/ell(t) + phi(r)/phi(t)) against d phi(r).

    Returns
    -------
    float or Divergent

    Notes
    -----
      For ell = r^eta and phi = r^alpha the value is
      (alpha/(alpha+eta-1) + alpha/(2 alpha-1)) t^(alpha-1).
    """
    if not (0 < t <= 1):
        raise DomainError("M_phi_ell requires t in (0,1].")
    ell_t = m(t)
    phi_t = float(p.phi(t))

    def integrand(r):
        return (m(r) / ell_t + float(p.phi(r)) / phi_t) * float(p.dphi(r)) / r

    return integrate_to_zero(integrand, t, quad, "M^phi_ell")


@typechecked
def check_dini(m: Modulus, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> bool:
    """
    True iff ell is non-decreasing on (0,1] (sampled) and its Dini integral converges.
    """
    t = np.logspace(-12, 0, 97)
    values = m(t)
    if np.any(np.diff(values) < -1e-14 * np.abs(values[1:])):
        return False
    try:
        value = integrate_to_zero(lambda s: m(s) / s, 1., quad, "Dini integral")
    except IndeterminateError as err:
        logger.warning("Dini test of %s inconclusive: %s", m.name, err)
        return False
    return not is_divergent(value)


@typechecked
def potter_bound(m: Modulus, delta: Real, lattice: Optional[np.ndarray]=None) -> float:
    """
    Smallest C with ell(s)/ell(t) <= C max((s/t)^delta, (s/t)^(-delta)) over a lattice.

    Parameters
    ----------
    m : Modulus
      Slowly varying modulus.
    delta : float
      Positive exponent.
    lattice : numpy.ndarray of shape (n, 2), optional
      Pairs (s, t); defaults to all pairs of a 4-decade grid in (0,1].

    Raises
    ------
    DomainError
      When 'S0' is not claimed or delta <= 0.
    """
    if SLOWLY_VARYING not in m.class_tag:
        raise DomainError("potter_bound requires a slowly varying modulus.")
    if delta <= 0:
        raise DomainError("delta must be positive.")
    if lattice is None:
        grid = np.logspace(-4, 0, 17)
        s, t = np.meshgrid(grid, grid)
        lattice = np.column_stack([s.ravel(), t.ravel()])
    s, t = lattice[:, 0], lattice[:, 1]
    q = s / t
    bound = np.maximum(q ** delta, q ** (-delta))
    return float(np.max(m(s) / m(t) / bound))


@typechecked
def h_ell_phi(m: Modulus, p: ScalingProfile, t: Real, r: Union[Real, np.ndarray]):
    """
    Weighted profile h^ell_phi(t,x) = ell(phi^{-1}(t) + |x|) rho_phi(t,x), with r = |x|.
    """
    a = p.inverse(t)
    values = m(a + np.asarray(r, dtype=float)) * rho(p, t, r)
    if np.ndim(r) == 0:
        return float(values)
    return values


@typechecked
def s0_limit(m: Modulus, lam: Real, ks: Sequence[int]=tuple(range(10, 41))) -> float:
    """
    Richardson-extrapolated limit of ell(lam t)/ell(t) as t -> 0 along t = 2^-k,
    assuming an expansion in powers of 1/k.
    """
    k = np.asarray(ks, dtype=float)
    t = 2. ** (-k)
    ratios = m(lam * t) / m(t)
    coeffs = np.polyfit(1. / k, ratios, 2)
    return float(coeffs[-1])


@typechecked
def verify_class_tag(m: Modulus, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> dict:
    """
    Numeric checks of each claimed class.

    Returns
    -------
    dict
      Keys among 'S0', 'D0', 'R' mapped to booleans.
    """
    result = {}
    if SLOWLY_VARYING in m.class_tag:
        result[SLOWLY_VARYING] = all(abs(s0_limit(m, lam) - 1.) <= 1e-2 for lam in (0.5, 2.))
    if DINI in m.class_tag:
        result[DINI] = check_dini(m, quad)
    if REGULARLY_VARYING in m.class_tag:
        result[REGULARLY_VARYING] = all(abs(s0_limit(m, lam) - lam ** m.alpha) <= 1e-2 * lam ** m.alpha
                                        for lam in (0.5, 2.))
    return result


# CONVOLUTION INEQUALITIES

def _sphere_area(d):
    return 2. * np.pi ** (d / 2.) / gamma_function(d / 2.)


def _check_small_index(m):
    if REGULARLY_VARYING not in m.class_tag or m.alpha is None or not (0 <= m.alpha < 1):
        raise DomainError("Convolution inequalities need a modulus regularly varying with index in [0,1); "
                          "{} does not qualify.".format(m.name))


@dataclass
class ConvolutionReport:
    """
    Measured constants of the two convolution inequalities.

    Attributes
    ----------
    dk2_ratio : float
      Largest ratio of the integral of h^ell_phi(u,.) to ell_phi(u)/u, over (ell1, t-s) and (ell2, s).
    dk1_ratios : numpy.ndarray
      Ratio of the space convolution to its bound at each point of x_grid.
    rhs_terms : tuple of float
      The two terms ell_phi(t-s)/(t-s) and ell_phi(s)/s of the bound.
    x_grid : numpy.ndarray
      Radii |x| at which the convolution was evaluated.
    passed : bool
      True when every ratio is finite and positive.
    """
    dk2_ratio: float
    dk1_ratios: np.ndarray
    rhs_terms: Tuple[float, float]
    x_grid: np.ndarray
    passed: bool

    @property
    def dk1_max(self):
        return float(np.max(self.dk1_ratios))

    @property
    def dk1_min(self):
        return float(np.min(self.dk1_ratios))


def space_integral_h(m, p, t, quad=DEFAULT_QUADRATURE):
    """Integral of h^ell_phi(t, x) over R^d by polar coordinates."""
    a = p.inverse(t)
    d = p.d
    f = lambda r: h_ell_phi(m, p, t, r) * r ** (d - 1)
    value = integrate_positive_axis(f, (a, 1.), quad, "integral of h")
    if is_divergent(value):
        raise DivergenceError("Integral of h^ell_phi diverges for {}.".format(m.name))
    return _sphere_area(d) * value


def _space_convolution(m1, m2, p, t, s, x, quad):
    u = t - s
    if p.d == 1:
        f = lambda y: h_ell_phi(m1, p, u, abs(x - y)) * h_ell_phi(m2, p, s, abs(y))
        lo, hi = min(0., x), max(0., x)
        scale = min(p.inverse(u), p.inverse(s))
        left = integrate_positive_axis(lambda v: f(lo - v), (scale, 1.), quad, "convolution")
        right = integrate_positive_axis(lambda v: f(hi + v), (scale, 1.), quad, "convolution")
        middle = quad_linear(f, lo, hi, quad) if hi > lo else 0.
        return left + middle + right
    if p.d == 2:
        def radial(r):
            g = lambda th: h_ell_phi(m1, p, u, np.hypot(x - r * np.cos(th), r * np.sin(th)))
            return 2. * quad_linear(g, 0., np.pi, quad) * h_ell_phi(m2, p, s, r) * r
        breaks = sorted(set(v for v in (p.inverse(s), abs(x), 1.) if v > 0))
        return integrate_positive_axis(radial, breaks, quad, "convolution")
    raise DomainError("Space convolution is implemented for d in {1, 2}.")


@typechecked
def verify_convolution(m1: Modulus, m2: Modulus, p: ScalingProfile, t: Real, s: Real,
                       grid: Optional[Union[Sequence[float], np.ndarray]]=None,
                       quad: QuadratureConfig=DEFAULT_QUADRATURE) -> ConvolutionReport:
    """
    Measures the constants of the two convolution inequalities of h^ell_phi.

    Parameters
    ----------
    m1, m2 : Modulus
      Moduli regularly varying with index in [0,1).
    p : ScalingProfile
      Profile.
    t, s : float
      Times with 0 < s < t.
    grid : sequence of float, optional
      Radii |x| (along the first axis) where the convolution is measured.
    quad : QuadratureConfig
      Quadrature settings.

    Returns
    -------
    ConvolutionReport

    Notes
    -----
      The bound of the space convolution is
      (L(t-s)/(t-s) + L(s)/s) h^{ell1 v ell2}_phi(t,x), L = (ell1 v ell2) o phi^{-1},
      so that both terms coincide at s = t/2.
    """

    # Checks
    _check_small_index(m1)
    _check_small_index(m2)
    if not (0 < s < t):
        raise DomainError("verify_convolution requires 0 < s < t.")

    # Initializations
    u = t - s
    m12 = maximum(m1, m2)
    if grid is None:
        a = p.inverse(t)
        x_grid = np.array([0., 0.5 * a, a, 2. * a, 1., 4.])
    else:
        x_grid = np.asarray(grid, dtype=float)

    dk2 = max(space_integral_h(m1, p, u, quad) / (ell_phi(m1, p, u) / u),
              space_integral_h(m2, p, s, quad) / (ell_phi(m2, p, s) / s))

    terms = (ell_phi(m12, p, u) / u, ell_phi(m12, p, s) / s)
    ratios = []
    for x in x_grid:
        lhs = _space_convolution(m1, m2, p, t, s, float(x), quad)
        rhs = (terms[0] + terms[1]) * h_ell_phi(m12, p, t, float(x))
        ratios.append(lhs / rhs)
    ratios = np.asarray(ratios)
    passed = bool(np.all(np.isfinite(ratios)) and np.all(ratios > 0) and np.isfinite(dk2))
    logger.info("Convolution check (t=%g, s=%g): DK2 ratio %.4g, DK1 ratios in [%.4g, %.4g]",
                t, s, dk2, ratios.min(), ratios.max())
    return ConvolutionReport(float(dk2), ratios, terms, x_grid, passed)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
