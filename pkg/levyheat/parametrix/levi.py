# Created on 2020/10/5

# This module is for the Levi construction in d=1: the pivoted expansion of kappa
# in x, the defect kernel q0, the Picard series for q and the assembled heat kernel.

# Standard library imports
import json
import logging
from numbers import Real
from typing import List, Optional
import warnings

# Third party imports
import numpy as np
import pandas as pd
from scipy import linalg
from scipy.interpolate import RectBivariateSpline
from typeguard import typechecked

# Local application imports
from ..exceptions import ConfigurationError, ConvergenceError, DomainError, ResolutionError
from ..fouriertrf import inverse_transform, inverse_transform_at, make_grid
from ..frozen import DEFAULT_GRID, GridConfig, SpectralPlan, frequency_cutoff
from ..moduli import h_ell_phi, squared
from ..quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .kernels import DEFAULT_PARAMETRIX, ParametrixConfig, VariableKernelSpec, graded_nodes

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


DIRECT = 'direct'
CHAPMAN_KOLMOGOROV = 'ck'

_SAMPLE_TIMES = (0., 0.5, 1.)
_GRID_FIELDS = ('n_x', 'half_width', 'fft_factor', 'rank_tol', 'max_rank', 'nodes_per_decade', 'alias_images')


def same_grid(a: ParametrixConfig, b: ParametrixConfig) -> bool:
    """Whether two settings share the spatial grid and the symbols."""
    return all(getattr(a, name) == getattr(b, name) for name in _GRID_FIELDS)


class SymbolBank:
    """
    Expansion kappa(t, x, z) = sum_k A_k(x) kappa(t, x_k, z) over a few pivot positions
    x_k of the spatial grid, with the Fourier symbols of the pivot kernels.

    Attributes
    ----------
    spec : VariableKernelSpec
      Kernel.
    cfg : ParametrixConfig
      Grid settings.
    x : numpy.ndarray
      Spatial grid.
    fourier : FourierGrid
      FFT grid of size fft_factor n_x with the same step, sampling increments y - x.
    pivots : numpy.ndarray
      Indices of the pivot positions in x.
    coefficients : numpy.ndarray
      A_k(x) on the grid, shape (K, n_x).
    rank_residual : float
      Largest error of the expansion on the sampled (t, z) values.

    Notes
    -----
      The pivots come from a column-pivoted QR factorization of the matrix of
      samples kappa(t, x, z) with one column per grid point x. A kernel that does
      not depend on x is represented by a single pivot with A = 1.
    """

    def __init__(self, spec: VariableKernelSpec, cfg: ParametrixConfig=DEFAULT_PARAMETRIX,
                 quad: QuadratureConfig=DEFAULT_QUADRATURE):
        if not isinstance(spec, VariableKernelSpec):
            raise TypeError("spec must be a VariableKernelSpec.")
        self.spec = spec
        self.cfg = cfg
        self.quad = quad
        self.x = cfg.axis()
        self.step = cfg.step
        self.fourier = make_grid(cfg.fft_factor * cfg.n_x, float(cfg.step))
        self.xi = self.fourier.frequency_axis()
        self.w = self.fourier.axis()
        self._times = (0.,) if spec.time_homogeneous else _SAMPLE_TIMES
        self._basis = None
        self._select()
        self.positions = self.x[self.pivots]
        self.kernels = [spec.frozen_at(p) for p in self.positions]
        self.plan_cfg = GridConfig(n=self.fourier.n, step=float(self.step), decay=1.,
                                   nodes_per_decade=cfg.nodes_per_decade, alias_images=cfg.alias_images)
        self._plans = {}
        self._cache = {}
        logger.info("Symbol bank of %s: %d pivot(s) at x=%s, expansion residual %.3g",
                    spec.name, self.rank, np.round(self.positions, 6).tolist(), self.rank_residual)

    @property
    def rank(self):
        return int(self.pivots.size)

    def _samples(self, points):
        points = np.asarray(points, dtype=float).reshape(-1)
        X, Z = np.meshgrid(points, self.spec.lattice_z, indexing='ij')
        return np.hstack([self.spec(tau, X.ravel(), Z.ravel()).reshape(X.shape) for tau in self._times])

    def _select(self):
        n = self.x.size
        if self.spec.x_independent:
            self.pivots = np.array([n // 2])
            self.coefficients = np.ones((1, n))
            self.rank_residual = 0.
            return

        M = self._samples(self.x)
        _, R, order = linalg.qr(M.T, mode='economic', pivoting=True)
        diag = np.abs(np.diag(R))
        rank = int(np.sum(diag > self.cfg.rank_tol * diag[0]))
        if rank > self.cfg.max_rank:
            warnings.warn("kappa of {} needs {} pivots, truncated to {}.".format(self.spec.name, rank,
                                                                                 self.cfg.max_rank))
        rank = max(1, min(rank, self.cfg.max_rank))
        self.pivots = np.sort(order[:rank])
        self._basis = M[self.pivots].T
        A = linalg.lstsq(self._basis, M.T)[0]
        A[:, self.pivots] = np.eye(rank)
        self.coefficients = A
        self.rank_residual = float(np.max(np.abs(self._basis @ A - M.T)))

    def coefficients_at(self, points):
        """A_k at arbitrary positions, shape (K, m)."""
        points = np.asarray(points, dtype=float).reshape(-1)
        if self._basis is None:
            return np.ones((1, points.size))
        return linalg.lstsq(self._basis, self._samples(points).T)[0]

    # PLANS

    def _plan(self, k, b, time=None):
        key = (k, float(b), time)
        if key not in self._plans:
            if time is None:
                kernel = self.kernels[k]
            else:
                kernel = self.spec.frozen_at(self.positions[k], time=time)
            self._plans[key] = SpectralPlan(kernel, 0., float(b), self.plan_cfg, self.quad)
        return self._plans[key]

    def _instant(self, k, time):
        if self.spec.time_homogeneous:
            return self._plan(k, 1.)
        return self._plan(k, 1., float(time))

    def _stacked(self, key, build):
        if key not in self._cache:
            self._cache[key] = np.array([build(k) for k in range(self.rank)])
        return self._cache[key]

    def symbols(self, time=0.):
        """Symbols psi_k(xi) of the pivot generators at `time`, shape (K, N)."""
        key = ('symbol', None if self.spec.time_homogeneous else float(time))
        return self._stacked(key, lambda k: self._instant(k, time).table(self.xi))

    def generator_images(self, time=0.):
        """Periodic images of the pivot jump densities at `time`, shape (K, N)."""
        key = ('images', None if self.spec.time_homogeneous else float(time))
        return self._stacked(key, lambda k: self._instant(k, time).alias(self.w[:, None]))

    def _cumulative(self, what, b):
        if b <= 0:
            return np.zeros((self.rank, self.fourier.n), dtype=complex if what == 'exponent' else float)
        if what == 'exponent':
            return self._stacked(('cexp', float(b)), lambda k: self._plan(k, b).table(self.xi))
        return self._stacked(('cimg', float(b)), lambda k: self._plan(k, b).alias(self.w[:, None]))

    def exponent(self, a, b):
        """Exponents int_a^b psi_k(r, xi) dr of the pivot kernels, shape (K, N)."""
        if self.spec.time_homogeneous:
            return (b - a) * self.symbols()
        return self._cumulative('exponent', b) - self._cumulative('exponent', a)

    def density_images(self, a, b):
        """Periodic images of the tail models of the pivot densities over [a, b], shape (K, N)."""
        if self.spec.time_homogeneous:
            return (b - a) * self.generator_images()
        return self._cumulative('images', b) - self._cumulative('images', a)

    def far_tails(self, a, b):
        """Tail masses beyond the half period, right and left, shape (K, 2)."""
        h, half = self.step, 0.5 * self.fourier.length

        def masses(plan):
            return [plan.radial_tail(0, half - 0.5 * h), plan.radial_tail(1, half + 0.5 * h)]

        if self.spec.time_homogeneous:
            return (b - a) * self._stacked(('far', None), lambda k: masses(self._plan(k, 1.)))
        upper = self._stacked(('far', float(b)), lambda k: masses(self._plan(k, b)))
        if a <= 0:
            return upper
        return upper - self._stacked(('far', float(a)), lambda k: masses(self._plan(k, a)))

    # GENERATOR

    def generator(self, time, values):
        """
        Applies L^kappa_time to functions sampled on x, extended by zero; shape (n_x,) or (n_x, m).
        """
        values = np.asarray(values, dtype=float)
        n, N = self.x.size, self.fourier.n
        offset = N // 2 - n // 2
        padded = np.zeros((N,) + values.shape[1:])
        padded[offset:offset + n] = values
        spectrum = np.fft.fft(padded, axis=0)
        psi = self.symbols(time)
        out = np.zeros(values.shape)
        for k in range(self.rank):
            factor = psi[k].reshape((N,) + (1,) * (values.ndim - 1))
            part = np.fft.ifft(spectrum * factor, axis=0).real[offset:offset + n]
            out += self.coefficients[k].reshape((n,) + (1,) * (values.ndim - 1)) * part
        return out


class DefectField:
    """
    Defect kernel q0(r_i, r_j, x, y) and frozen kernels p^(y)_{t, r_j}(x, y) on the grid,
    for the graded time nodes r_0 = t < ... < r_n = s.

    Attributes
    ----------
    t, s : float
      Time window.
    nodes : numpy.ndarray
      Graded time nodes.
    weights : numpy.ndarray
      Time weights (r_{j+1} - r_{j-1})/2 of the interior nodes, times the spatial step.
    q0 : dict
      (i, j) -> matrix q0(r_i, r_j, x_a, y_b) for i < j.
    frozen : dict
      j -> matrix p^(y_b)_{t, r_j}(x_a, y_b).
    outside : numpy.ndarray
      Mass of p^(x)_{t,s}(x, .) outside the grid, per row.
    """

    def __init__(self, spec: VariableKernelSpec, t, s, cfg: ParametrixConfig=DEFAULT_PARAMETRIX,
                 bank: Optional[SymbolBank]=None, quad: QuadratureConfig=DEFAULT_QUADRATURE):

        # Checks
        if not (0 <= t < s):
            raise DomainError("The Levi construction requires 0 <= t < s, got t={}, s={}.".format(t, s))
        if bank is None:
            bank = SymbolBank(spec, cfg, quad)
        elif bank.spec is not spec or not same_grid(bank.cfg, cfg):
            raise ConfigurationError("The symbol bank was built for another kernel or grid.")

        # Initializations
        self.spec = spec
        self.cfg = cfg
        self.bank = bank
        self.quad = quad
        self.t, self.s = float(t), float(s)
        self.nodes = graded_nodes(self.t, self.s, cfg.n_time, spec.profile.beta1)
        self.n_time = cfg.n_time
        self.x = bank.x
        self.step = bank.step
        n_x, N = cfg.n_x, bank.fourier.n
        idx = np.arange(n_x)
        self._cols = np.broadcast_to(idx[None, :], (n_x, n_x))
        self._offsets = idx[None, :] - idx[:, None] + N // 2
        self.weights = np.zeros(self.n_time + 1)
        self.weights[1:-1] = 0.5 * (self.nodes[2:] - self.nodes[:-2]) * self.step
        self._norm_weights = {}

        self._check_decay()
        A = bank.coefficients
        self.q0, self.frozen = {}, {}
        zero = np.zeros((n_x, n_x))
        for i in range(self.n_time):
            a = self.nodes[i]
            for j in range(i + 1, self.n_time + 1):
                b = self.nodes[j]
                cf = np.exp(A.T @ bank.exponent(a, b))
                if i == 0:
                    D = inverse_transform(bank.fourier, cf) - A.T @ bank.density_images(a, b)
                    self.frozen[j] = D[self._cols, self._offsets]
                    if j == self.n_time:
                        self.outside = self._outside_mass(D)
                self.q0[(i, j)] = zero if spec.x_independent else self._defect_block(cf, a)
        logger.info("Defect field of %s on [%g, %g]: %d nodes, %d pairs", spec.name, t, s,
                    self.n_time + 1, len(self.q0))

    def _check_decay(self):
        A = self.bank.coefficients
        N = self.bank.fourier.n
        edge = (A.T @ self.bank.exponent(self.t, self.s)[:, N // 2]).real
        level = float(np.exp(edge.max()))
        if level > self.cfg.decay:
            worst = float(self.x[int(np.argmax(edge))])
            cutoff = frequency_cutoff(self.spec.frozen_at(worst), self.t, self.s, self.cfg.decay, self.quad)
            required = np.pi / cutoff
            n_x = int(2 ** np.ceil(np.log2(2. * self.cfg.half_width / required)))
            raise ConfigurationError(
                "Grid step {:.6g} does not resolve p on [{:g}, {:g}] (|exp Psi| = {:.3g} at Nyquist); "
                "the step must be at most {:.6g}, e.g. n_x >= {}.".format(self.step, self.t, self.s, level,
                                                                        required, n_x),
                diagnostics={'step': self.step, 'required_step': required, 'decay': level})

    def _defect_block(self, cf, time):
        A = self.bank.coefficients
        psi = self.bank.symbols(time)
        images = self.bank.generator_images(time)
        Q = np.zeros(self._cols.shape)
        for k in range(self.bank.rank):
            G = inverse_transform(self.bank.fourier, psi[k][None, :] * cf) - images[k][None, :]
            Q += (A[k][:, None] - A[k][None, :]) * G[self._cols, self._offsets]
        return Q

    def _outside_mass(self, D):
        n_x, N = self.cfg.n_x, self.bank.fourier.n
        target = np.arange(N)[None, :] - N // 2 + np.arange(n_x)[:, None]
        outside = (target < 0) | (target >= n_x)
        near = self.step * np.sum(np.where(outside, D, 0.), axis=1)
        far = self.bank.coefficients.T @ self.bank.far_tails(self.t, self.s).sum(axis=1)
        return near + far

    # NORMS

    def norm_weight(self, i):
        """h^{ell^2}_phi(s - r_i, |x - y|) on the grid."""
        if i not in self._norm_weights:
            m = squared(self.spec.modulus)
            r = self.step * np.arange(self.cfg.n_x)
            h = h_ell_phi(m, self.spec.profile, float(self.s - self.nodes[i]), r)
            self._norm_weights[i] = h[np.abs(self._offsets - self.bank.fourier.n // 2)]
        return self._norm_weights[i]

    def norm(self, values):
        """Weighted sup norm max_i max_{x,y} |q_i(x,y)| / h^{ell^2}_phi(s - r_i, x - y)."""
        return max(float(np.max(np.abs(v) / self.norm_weight(i))) for i, v in enumerate(values))

    def defect_ratio(self):
        """Largest |q0(r_i, r_j, x, y)| / h^{ell^2}_phi(r_j - r_i, x - y) over all pairs."""
        m = squared(self.spec.modulus)
        r = self.step * np.arange(self.cfg.n_x)
        index = np.abs(self._offsets - self.bank.fourier.n // 2)
        worst = 0.
        for (i, j), Q in self.q0.items():
            h = h_ell_phi(m, self.spec.profile, float(self.nodes[j] - self.nodes[i]), r)[index]
            worst = max(worst, float(np.max(np.abs(Q) / h)))
        return worst


class QKernel:
    """
    Solution q(r_i, s, x, y) of the integral equation q = q0 + q0 * q on the nodes r_i < s.

    Attributes
    ----------
    defect : DefectField
      Discretization it was solved on.
    values : list of numpy.ndarray
      q(r_i, s, ., .) for i = 0, ..., n-1.
    norms : list of float
      Weighted norms of the Picard terms.
    ratios : list of float
      Successive ratios of the norms.
    residual : float
      Weighted norm of q - q0 - q0 * q.
    tol : float
      Truncation tolerance.
    """

    def __init__(self, defect, values, norms, ratios, residual, tol):
        self.defect = defect
        self.values = values
        self.norms = list(norms)
        self.ratios = list(ratios)
        self.residual = float(residual)
        self.tol = float(tol)

    def __repr__(self):
        return "QKernel([{:g}, {:g}], terms={}, contraction={:.4g}, residual={:.3g})".format(
            self.defect.t, self.defect.s, self.terms, self.contraction, self.residual)

    @property
    def terms(self):
        return len(self.norms)

    @property
    def contraction(self):
        return max(self.ratios) if self.ratios else 0.

    @property
    def norm(self):
        return self.defect.norm(self.values)


# PICARD SERIES

def picard_step(q_prev: List[np.ndarray], defect: DefectField) -> List[np.ndarray]:
    """
    Next Picard term q^(m)(r_i) = sum_{i<j<n} w_j q0(r_i, r_j) q^(m-1)(r_j).

    Raises
    ------
    ConfigurationError
      When q_prev is not sampled on the nodes and grid of `defect`.
    """
    n, n_x = defect.n_time, defect.cfg.n_x
    if len(q_prev) != n or any(np.shape(q) != (n_x, n_x) for q in q_prev):
        raise ConfigurationError("Picard term does not match the grid of the defect field.")
    out = []
    for i in range(n):
        acc = np.zeros((n_x, n_x))
        for j in range(i + 1, n):
            acc += defect.weights[j] * (defect.q0[(i, j)] @ q_prev[j])
        out.append(acc)
    return out


@typechecked
def solve_q(spec: VariableKernelSpec, t: Real, s: Real, cfg: ParametrixConfig=DEFAULT_PARAMETRIX,
            tol: Optional[Real]=None, bank: Optional[SymbolBank]=None, defect: Optional[DefectField]=None,
            quad: QuadratureConfig=DEFAULT_QUADRATURE) -> QKernel:
    """
    Sums the Picard series of q on [t, s].

    Parameters
    ----------
    spec : VariableKernelSpec
      Kernel.
    t, s : float
      Times with 0 <= t < s.
    cfg : ParametrixConfig
      Grids.
    tol : float, optional
      Truncation tolerance in the weighted norm, cfg.tol by default.
    bank, defect : optional
      Precomputed symbols or discretization.

    Returns
    -------
    QKernel

    Raises
    ------
    ConvergenceError
      When a term above tol is not smaller than the previous one, or after
      cfg.max_terms terms.

    Notes
    -----
      The series stops at the first term with norm <= tol (1 - rho)/rho, rho the
      last observed ratio.
    """

    # Initializations
    tol = cfg.tol if tol is None else float(tol)
    if defect is None:
        defect = DefectField(spec, t, s, cfg, bank, quad)
    n = defect.n_time
    term = [defect.q0[(i, n)] for i in range(n)]
    total = [q.copy() for q in term]
    norms, ratios = [defect.norm(term)], []

    while norms[-1] > 0:
        if len(norms) >= cfg.max_terms:
            raise ConvergenceError("Picard series not truncated after {} terms on [{:g}, {:g}]."
                                   .format(cfg.max_terms, t, s), diagnostics={'norms': norms})
        term = picard_step(term, defect)
        norm = defect.norm(term)
        if norm == 0:
            norms.append(0.)
            break
        ratio = norm / norms[-1]
        ratios.append(ratio)
        norms.append(norm)
        if ratio >= 1 and norm > tol:
            raise ConvergenceError(
                "Picard series does not contract on [{:g}, {:g}] (ratio {:.4g}); "
                "use an interval of length at most {:.6g}.".format(t, s, ratio, 0.5 * (s - t)),
                diagnostics={'ratios': ratios, 'norms': norms})
        for i in range(n):
            total[i] += term[i]
        if ratio < 1 and norm <= tol * (1. - ratio) / ratio:
            break

    step = picard_step(total, defect)
    residual = defect.norm([total[i] - defect.q0[(i, n)] - step[i] for i in range(n)])
    if residual > 3. * tol:
        raise ConvergenceError("Residual {:.3g} of the equation for q exceeds 3 tol.".format(residual),
                               diagnostics={'residual': residual, 'tol': tol})
    logger.info("q on [%g, %g]: %d terms, contraction %.4g, residual %.3g", t, s, len(norms),
                max(ratios) if ratios else 0., residual)
    return QKernel(defect, total, norms, ratios, residual, tol)


# HEAT KERNEL

class HeatKernelField:
    """
    Heat kernel p(t, x; s, y) sampled on a square grid.

    Attributes
    ----------
    values : numpy.ndarray
      p(t, x_a; s, y_b), shape (n_x, n_x).
    x : numpy.ndarray
      Grid, shared by x and y.
    t, s : float
      Time window.
    tail_mass : numpy.ndarray
      Estimated mass outside the grid, per row.
    ledger : list of dict
      Intervals computed directly or by Chapman-Kolmogorov composition.
    kernel_id, profile_id : str
      Names of the kernel and the profile.
    """

    def __init__(self, values, x, t, s, tail_mass, ledger=None, kernel_id="", profile_id="",
                 mass_tol=1e-3):
        self.values = np.asarray(values, dtype=float)
        self.x = np.asarray(x, dtype=float)
        self.t, self.s = float(t), float(s)
        self.tail_mass = np.asarray(tail_mass, dtype=float)
        self.ledger = list(ledger or [{'t': self.t, 's': self.s, 'method': DIRECT}])
        self.kernel_id = kernel_id
        self.profile_id = profile_id
        self.mass_tol = float(mass_tol)
        self._interp = None

    def __repr__(self):
        return "HeatKernelField(n={}, t={:g}, s={:g}, mass error={:.3g})".format(
            self.x.size, self.t, self.s, self.mass_error)

    @property
    def step(self):
        return float(self.x[1] - self.x[0])

    @property
    def half_width(self):
        return -float(self.x[0])

    @property
    def grid_mass(self):
        return self.step * self.values.sum(axis=1)

    @property
    def masses(self):
        return self.grid_mass + self.tail_mass

    @property
    def interior(self):
        """Rows and columns with |x| <= half_width/2."""
        return np.abs(self.x) <= 0.5 * self.half_width

    @property
    def mass_error(self):
        return float(np.max(np.abs(self.masses[self.interior] - 1.)))

    @property
    def min_value(self):
        return float(np.min(self.values))

    @property
    def negative(self):
        """Whether some sample lies below -1e-6 max(p)."""
        return self.min_value < -1e-6 * float(np.max(self.values))

    def at(self, x, y):
        """Bicubic interpolation of p at points (x, y) of the grid square."""
        if self._interp is None:
            self._interp = RectBivariateSpline(self.x, self.x, self.values, kx=3, ky=3)
        return self._interp.ev(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def apply(self, f):
        """(P f)(x) = int p(t, x; s, y) f(y) dy for f sampled on the grid."""
        return self.step * self.values @ np.asarray(f, dtype=float)

    # EXPORT

    def metadata(self):
        return {'t': self.t, 's': self.s, 'kernel': self.kernel_id, 'profile': self.profile_id,
                'n': self.x.size, 'step': self.step, 'half_width': self.half_width,
                'mass_error': self.mass_error}

    def row(self, x0):
        """Slice p(t, x0; s, .) at the grid point nearest to x0."""
        a = int(np.argmin(np.abs(self.x - x0)))
        return pd.DataFrame({'y': self.x, 'p': self.values[a]})

    def column(self, y0):
        """Slice p(t, .; s, y0) at the grid point nearest to y0."""
        b = int(np.argmin(np.abs(self.x - y0)))
        return pd.DataFrame({'x': self.x, 'p': self.values[:, b]})

    def to_csv(self, path, x0=None, y0=None):
        """
        Writes the slice p(t, x0; s, .) or p(t, .; s, y0) to CSV after '# key=value' lines.
        """
        if (x0 is None) == (y0 is None):
            raise ValueError("Exactly one of x0 and y0 must be given.")
        frame = self.row(x0) if x0 is not None else self.column(y0)
        meta = self.metadata()
        meta.update({'x0': x0} if x0 is not None else {'y0': y0})
        with open(path, 'w') as fh:
            for key, value in meta.items():
                fh.write("# {}={}\n".format(key, value))
            frame.to_csv(fh, index=False, float_format='%.17g')

    def ledger_frame(self):
        return pd.DataFrame(self.ledger, columns=['t', 's', 'method'])

    def write_ledger(self, path):
        """Writes the interval ledger as JSON."""
        with open(path, 'w') as fh:
            json.dump({'t': self.t, 's': self.s, 'intervals': self.ledger}, fh, indent=2)


@typechecked
def assemble_p(spec: VariableKernelSpec, q: QKernel) -> HeatKernelField:
    """
    Heat kernel p(t,x;s,y) = p^(y)_{t,s}(x,y) + int_t^s int p^(z)_{t,r}(x,z) q(r,s,z,y) dz dr.

    Notes
    -----
      Row masses add the mass of p^(x)_{t,s}(x, .) outside the grid; a deviation from 1
      beyond mass_tol on interior rows is reported by a warning.
    """
    defect = q.defect
    if defect.spec is not spec:
        raise ConfigurationError("q was solved for another kernel.")
    n = defect.n_time
    P = defect.frozen[n].copy()
    for j in range(1, n):
        P += defect.weights[j] * (defect.frozen[j] @ q.values[j])
    field = HeatKernelField(P, defect.x, defect.t, defect.s, defect.outside, kernel_id=spec.name,
                            profile_id=spec.profile.name, mass_tol=defect.cfg.mass_tol)
    if field.mass_error > defect.cfg.mass_tol:
        warnings.warn("Row masses of p on [{:g}, {:g}] deviate from 1 by {:.3g}.".format(
            defect.t, defect.s, field.mass_error))
    if field.negative:
        logger.warning("Negative samples in p on [%g, %g]: min %.3g", defect.t, defect.s, field.min_value)
    return field


# POINTWISE DEFECT

@typechecked
def q0(spec: VariableKernelSpec, t: Real, s: Real, x: Real, y: Real, grid: GridConfig=DEFAULT_GRID,
       quad: QuadratureConfig=DEFAULT_QUADRATURE) -> float:
    """
    Defect kernel (L^{kappa_x}_t - L^{kappa_y}_t) p^(y)_{t,s}(x, y) at one pair of points.

    Parameters
    ----------
    spec : VariableKernelSpec
      Kernel.
    t, s : float
      Times with 0 <= t < s.
    x, y : float
      Points.
    grid : GridConfig
      Fourier grid of the frozen density at y.

    Raises
    ------
    ResolutionError
      When |x - y| exceeds half the period of the Fourier grid.
    """
    if not (0 <= t < s):
        raise DomainError("q0 requires 0 <= t < s.")
    if x == y or spec.x_independent:
        return 0.
    plan = SpectralPlan(spec.frozen_at(y), t, s, grid, quad)
    unit_cfg = GridConfig(n=plan.grid.n, step=plan.grid.step, decay=1., nodes_per_decade=grid.nodes_per_decade,
                          alias_images=grid.alias_images)
    at_x = SpectralPlan(spec.frozen_at(x, time=t), 0., 1., unit_cfg, quad)
    at_y = SpectralPlan(spec.frozen_at(y, time=t), 0., 1., unit_cfg, quad)
    w = float(y) - float(x)
    if abs(w) >= 0.5 * plan.grid.length:
        raise ResolutionError("|x - y| = {:g} exceeds half the grid period {:g}.".format(abs(w), 0.5 * plan.grid.length))
    xi = plan.grid.frequencies()
    symbol = at_x.table(xi) - at_y.table(xi)
    value = inverse_transform_at(plan.grid, symbol * plan.cf, np.array([w]))[0]
    images = at_x.alias(np.array([[w]]))[0] - at_y.alias(np.array([[w]]))[0]
    return float(value - images)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
