# Created on 2020/10/2

# This module is for position-dependent jump intensities kappa(t, x, z),
# their checks and the settings of the Levi construction.

# Standard library imports
from dataclasses import dataclass
import logging
from numbers import Real
from typing import Optional

# Third party imports
import numpy as np
from typeguard import typechecked

# Local application imports
from ..exceptions import ConfigurationError, DomainError, HypothesisGateError, ModelError
from ..frozen import FrozenKernelSpec, check_odd_cancellation
from ..moduli import Modulus, modulus_from_config, power
from ..profiles import CASE2, ScalingProfile, compute_A_phi
from ..quadrature import DEFAULT_QUADRATURE, QuadratureConfig, is_divergent

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


HYPOTHESIS_SYMMETRIC = 'H1'
HYPOTHESIS_GENERAL = 'H2'


@dataclass(frozen=True)
class ParametrixConfig:
    """
    Settings of the Levi construction in d=1.

    Attributes
    ----------
    n_x : int
      Points of the spatial grid (a power of two).
    half_width : float
      The grid covers [-half_width, half_width).
    n_time : int
      Number of time cells between t and s.
    tol : float
      Truncation tolerance of the Picard series in the weighted sup norm.
    max_terms : int
      Largest number of Picard terms.
    fft_factor : int
      Ratio between the FFT size and n_x (at least 2).
    rank_tol : float
      Relative tolerance of the pivoted expansion of kappa in x.
    max_rank : int
      Largest number of pivot positions.
    decay : float
      Largest |exp Psi| accepted at the Nyquist frequency for the interval itself.
    nodes_per_decade : int
      Density of the frequency nodes of the exponent tables.
    alias_images : int
      Periodic images corrected on each side.
    mass_tol : float
      Accepted deviation of row masses from 1.
    ck_tol : float
      Accepted Chapman-Kolmogorov residual relative to max p.
    """
    n_x: int = 256
    half_width: float = 8.
    n_time: int = 12
    tol: float = 1e-8
    max_terms: int = 40
    fft_factor: int = 4
    rank_tol: float = 1e-12
    max_rank: int = 8
    decay: float = 1e-4
    nodes_per_decade: int = 12
    alias_images: int = 32
    mass_tol: float = 1e-3
    ck_tol: float = 1e-3

    def __post_init__(self):
        if self.n_x < 8 or (self.n_x & (self.n_x - 1)) != 0:
            raise ConfigurationError("n_x must be a power of two >= 8.")
        if self.half_width <= 0 or self.n_time < 2 or self.tol <= 0 or self.fft_factor < 2:
            raise ConfigurationError("Invalid parametrix settings.")

    @property
    def step(self):
        return 2. * self.half_width / self.n_x

    def axis(self):
        return -self.half_width + self.step * np.arange(self.n_x)


DEFAULT_PARAMETRIX = ParametrixConfig()


def graded_nodes(t, s, n, beta1):
    """
    Times t = r_0 < ... < r_n = s concentrating like u^(1/beta1) at both ends.
    """
    gamma = max(1. / beta1, 1.)
    u = np.arange(n + 1) / n
    g = u ** gamma / (u ** gamma + (1. - u) ** gamma)
    return t + (s - t) * g


class VariableKernelSpec:
    """
    Jump intensity kappa(t, x, z) of the measure kappa(t,x,z)/(|z|^d phi(|z|)) dz.

    Attributes
    ----------
    kappa : callable
      kappa(t, x, z) with t a float and x, z arrays of shape (n, 1), returning shape (n,).
    profile : ScalingProfile
      Radial scale function (d=1).
    modulus : Modulus
      ell, with |kappa(t,x,z) - kappa(t,y,z)| <= ell(|x-y|)^2.
    kappa0 : float
      Bound with 1/kappa0 <= kappa <= kappa0.
    symmetric_in_z : bool
      Declared symmetry kappa(t,x,-z) = kappa(t,x,z); it selects the hypothesis checked.
    hypothesis : str
      'H1' (symmetric, A^(0) finite) or 'H2' (A^(1) finite), set by the gate.
    x_independent, time_homogeneous : bool
      Detected properties.
    """

    def __init__(self, kappa, profile, modulus, kappa0=1., symmetric_in_z=False, time_homogeneous=None,
                 name="", family="callable", params=None, gate=True, validate=True,
                 quad: QuadratureConfig=DEFAULT_QUADRATURE):

        # Checks
        if not callable(kappa):
            raise TypeError("kappa must be callable.")
        if not isinstance(profile, ScalingProfile):
            raise TypeError("profile must be a ScalingProfile.")
        if not isinstance(modulus, Modulus):
            raise TypeError("modulus must be a Modulus.")
        if profile.d != 1:
            raise DomainError("The variable-coefficient construction is implemented in d=1.")
        if kappa0 < 1:
            raise ValueError("kappa0 must be >= 1.")

        self.kappa = kappa
        self.profile = profile
        self.modulus = modulus
        self.kappa0 = float(kappa0)
        self.symmetric_in_z = bool(symmetric_in_z)
        self.name = name if name else family
        self.family = family
        self.params = dict(params or {})
        self.d = 1
        self.quad = quad

        self.lattice_x = np.linspace(-4., 4., 17)
        r = np.logspace(-6, 3, 28)
        self.lattice_z = np.concatenate([r, -r])
        self.x_independent = self._detect_x_independence()
        if time_homogeneous is None:
            time_homogeneous = self._detect_time_homogeneity()
        self.time_homogeneous = bool(time_homogeneous)

        if validate:
            self.check_bounds()
            self.check_oscillation()
            self.check_symmetry()
            if profile.case_tag == CASE2 and not self.symmetric_in_z:
                for x in self.lattice_x[::4]:
                    check_odd_cancellation(self.frozen_at(x))
        self.hypothesis = None
        self.A_value = None
        if gate:
            self.check_gate()

    def __repr__(self):
        return "VariableKernelSpec({}, {})".format(self.name, self.profile.name)

    def __call__(self, t, x, z):
        x = np.asarray(x, dtype=float).reshape(-1, 1)
        z = np.asarray(z, dtype=float).reshape(-1, 1)
        x, z = np.broadcast_arrays(x, z)
        return np.asarray(self.kappa(float(t), x, z), dtype=float).reshape(-1)

    def _sheet(self, t):
        """kappa(t, x, z) on the test lattice, shape (len(xs), len(zs))."""
        X, Z = np.meshgrid(self.lattice_x, self.lattice_z, indexing='ij')
        return self(t, X.ravel(), Z.ravel()).reshape(X.shape)

    def _detect_x_independence(self):
        return all(np.all(sheet == sheet[0:1, :]) for sheet in (self._sheet(0.), self._sheet(0.5)))

    def _detect_time_homogeneity(self):
        reference = self._sheet(0.)
        return all(np.array_equal(reference, self._sheet(t)) for t in (0.37, 1., 2.3))

    # CHECKS

    def check_bounds(self):
        """Raises ModelError unless 1/kappa0 <= kappa <= kappa0 on the test lattice."""
        for t in (0., 0.5, 1.):
            sheet = self._sheet(t)
            if np.any(sheet <= 0) or not np.all(np.isfinite(sheet)):
                raise ModelError("kappa of {} is not positive at t={}.".format(self.name, t))
            worst = max(float(sheet.max()), float((1. / sheet).max()))
            if worst > self.kappa0 * (1. + 1e-12):
                raise ModelError("kappa of {} leaves [1/kappa0, kappa0] (reaches {:.6g})."
                                 .format(self.name, worst))

    def check_oscillation(self):
        """Raises ModelError unless |kappa(t,x,z) - kappa(t,y,z)| <= ell(|x-y|)^2 on sampled triples."""
        for t in (0., 0.5, 1.):
            sheet = self._sheet(t)
            gaps = np.max(np.abs(sheet[:, None, :] - sheet[None, :, :]), axis=2)
            dist = np.abs(self.lattice_x[:, None] - self.lattice_x[None, :])
            off = dist > 0
            bound = np.zeros_like(dist)
            bound[off] = self.modulus(dist[off]) ** 2
            excess = gaps[off] - bound[off] * (1. + 1e-12)
            if np.any(excess > 1e-14):
                i = int(np.argmax(excess))
                raise ModelError("Oscillation of kappa in x exceeds ell^2 for {} (gap {:.4g} at |x-y|={:.4g}, "
                                 "bound {:.4g}).".format(self.name, gaps[off][i], dist[off][i], bound[off][i]))

    def check_symmetry(self):
        """Raises ModelError when a kernel declared symmetric is not even in z."""
        if not self.symmetric_in_z:
            return
        for t in (0., 0.5, 1.):
            sheet = self._sheet(t)
            half = self.lattice_z.size // 2
            if not np.allclose(sheet[:, :half], sheet[:, half:], rtol=1e-12, atol=0.):
                raise ModelError("Kernel {} is declared symmetric in z but is not.".format(self.name))

    def check_gate(self):
        """
        Checks the integrability hypothesis: A^(0) finite for symmetric kernels,
        A^(1) finite otherwise.

        Raises
        ------
        HypothesisGateError
          When the required constant diverges.
        """
        i, hypothesis = (0, HYPOTHESIS_SYMMETRIC) if self.symmetric_in_z else (1, HYPOTHESIS_GENERAL)
        value = compute_A_phi(self.profile, i, quad=self.quad)
        if is_divergent(value):
            raise HypothesisGateError("Hypothesis {} fails for profile {}: A^({}) diverges.".format(
                hypothesis, self.profile.name, i), hypothesis=hypothesis, diagnostics={'A': repr(value)})
        self.hypothesis = hypothesis
        self.A_value = float(value)
        logger.info("Hypothesis %s holds for %s with A^(%d)=%.6g", hypothesis, self.name, i, value)
        return hypothesis

    # FROZEN KERNELS

    def frozen_at(self, y, time=None):
        """
        Frozen kernel (t, z) -> kappa(t, y, z), or (t, z) -> kappa(time, y, z) when `time` is given.
        """
        base, y = self.kappa, float(y)

        def kappa(t, z):
            tt = t if time is None else time
            return np.asarray(base(float(tt), np.full_like(z, y), z), dtype=float).reshape(-1)

        homogeneous = self.time_homogeneous or time is not None
        return FrozenKernelSpec(kappa, self.profile, self.kappa0, self.symmetric_in_z, homogeneous,
                                name="{}@x={:g}".format(self.name, y), family='frozen', validate=False)

    def to_config(self):
        if self.family not in VARIABLE_KERNELS:
            raise ConfigurationError("Kernel {} cannot be serialized.".format(self.name))
        return {'name': self.family, 'params': dict(self.params), 'modulus': self.modulus.to_config()}


# BUILT-IN KERNELS

@typechecked
def sine_modulated_kernel(profile: ScalingProfile, modulus: Optional[Modulus]=None, a: Real=0.4,
                          skew: Real=0., reach: Optional[Real]=None, gate: bool=True) -> VariableKernelSpec:
    """
    kappa(t, x, z) = (1 + a (1 + sin x)/2 1_{|z| <= reach}) (1 + skew sign z).

    The default modulus is ell(r) = min(r, 1)^(1/2). The oscillation in x is at most
    a/2 (1 + |skew|) min(|x - y|, 2), below ell^2 when a (1 + |skew|) <= 1; other
    values are left to `check_oscillation`.
    """
    if not (0 <= a <= 2) or not abs(skew) < 1:
        raise ValueError("Requires 0 <= a <= 2 and |skew| < 1.")
    modulus = power(0.5) if modulus is None else modulus
    a, skew = float(a), float(skew)
    cut = np.inf if reach is None else float(reach)

    def kappa(t, x, z):
        x, z = x[:, 0], z[:, 0]
        return (1. + a * 0.5 * (1. + np.sin(x)) * (np.abs(z) <= cut)) * (1. + skew * np.sign(z))

    k0 = max((1. + a) * (1. + abs(skew)), 1. / (1. - abs(skew)))
    params = {'a': a, 'skew': skew, 'reach': reach}
    return VariableKernelSpec(kappa, profile, modulus, k0, skew == 0., True, family='sine_modulated',
                              params=params, name="sine({:g},{:g})".format(a, skew), gate=gate)


@typechecked
def x_constant_kernel(profile: ScalingProfile, c: Real=1., gate: bool=True) -> VariableKernelSpec:
    """kappa = c, a variable kernel that does not depend on x."""
    c = float(c)
    return VariableKernelSpec(lambda t, x, z: np.full(x.shape[0], c), profile, power(0.5), max(c, 1. / c),
                              True, True, family='x_constant', params={'c': c}, name="const({:g})".format(c),
                              gate=gate)


VARIABLE_KERNELS = {
    'sine_modulated': sine_modulated_kernel,
    'x_constant': x_constant_kernel,
}


@typechecked
def variable_kernel_from_config(config: dict, profile: ScalingProfile, gate: bool=True) -> VariableKernelSpec:
    """
    Builds a built-in variable kernel from {name, params, modulus}.
    """
    name = config.get('name')
    if name not in VARIABLE_KERNELS:
        raise ConfigurationError("Unknown variable kernel {!r}, expected one of {}."
                                 .format(name, sorted(VARIABLE_KERNELS)))
    params = dict(config.get('params', {}))
    if name == 'sine_modulated' and 'modulus' in config:
        params['modulus'] = modulus_from_config(config['modulus'])
    try:
        return VARIABLE_KERNELS[name](profile, gate=gate, **params)
    except (TypeError, ValueError) as err:
        raise ConfigurationError("Invalid parameters for kernel {}: {}".format(name, err))


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
