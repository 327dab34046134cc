# Created on 2020/10/9

# This module is for extending the heat kernel to long intervals by the
# Chapman-Kolmogorov equation and for the identities the extended kernel satisfies.

# Standard library imports
from dataclasses import dataclass, replace
import logging
from numbers import Real
from typing import Callable, List, Optional

# Third party imports
import numpy as np
from typeguard import typechecked

# Local application imports
from ..exceptions import AccuracyError, ConfigurationError, DomainError
from ..quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .estimates import epsilon0
from .kernels import DEFAULT_PARAMETRIX, ParametrixConfig, VariableKernelSpec
from .levi import CHAPMAN_KOLMOGOROV, HeatKernelField, SymbolBank, assemble_p, solve_q

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


FORWARD = 'forward'
BACKWARD = 'backward'

_FAR_NODES = 48


def _far_field(first, second, spec):
    """
    Contribution of intermediate points outside the grid to int p_{t,m}(x,z) p_{m,s}(z,y) dz,
    with both kernels replaced by their jump-density tails.
    """
    x, h = first.x, first.step
    u, w = np.polynomial.legendre.leggauss(_FAR_NODES)
    u = 0.5 * (u + 1.)
    w = 0.5 * w
    scale = first.half_width
    z_right = (x[-1] + 0.5 * h) + scale * u / (1. - u)
    z_left = (x[0] - 0.5 * h) - scale * u / (1. - u)
    z = np.concatenate([z_left, z_right])
    dz = np.tile(w * scale / (1. - u) ** 2, 2)
    phi = spec.profile.phi

    def jump_density(tau, start, end, length):
        S, E = np.meshgrid(start, end, indexing='ij')
        jump = E - S
        r = np.abs(jump)
        values = spec(tau, S.ravel(), jump.ravel()).reshape(S.shape)
        return length * values / (r * phi(r))

    T1 = jump_density(0.5 * (first.t + first.s), x, z, first.s - first.t)
    T2 = jump_density(0.5 * (second.t + second.s), z, x, second.s - second.t)
    return (T1 * dz[None, :]) @ T2


@typechecked
def compose(first: HeatKernelField, second: HeatKernelField,
            spec: Optional[VariableKernelSpec]=None) -> HeatKernelField:
    """
    Computes p_{t,s}(x,y) = int p_{t,m}(x,z) p_{m,s}(z,y) dz on the grid.

    Parameters
    ----------
    first, second : HeatKernelField
      Kernels on [t, m] and [m, s], sampled on the same grid.
    spec : VariableKernelSpec, optional
      When given, intermediate points outside the grid are added through the jump tails.

    Raises
    ------
    ConfigurationError
      When the intervals do not meet or the grids differ.
    """
    if not np.isclose(first.s, second.t, rtol=0., atol=1e-14) or not np.array_equal(first.x, second.x):
        raise ConfigurationError("Kernels on [{:g},{:g}] and [{:g},{:g}] cannot be composed.".format(
            first.t, first.s, second.t, second.s))
    h = first.step
    values = h * first.values @ second.values
    tail = h * first.values @ second.tail_mass + first.tail_mass
    if spec is not None:
        far = _far_field(first, second, spec)
        values = values + far
        tail = tail - h * far.sum(axis=1)
    ledger = first.ledger + second.ledger + [{'t': first.t, 's': second.s, 'method': CHAPMAN_KOLMOGOROV}]
    return HeatKernelField(values, first.x, first.t, second.s, tail, ledger, first.kernel_id,
                           first.profile_id, first.mass_tol)


def _tree(pieces, spec):
    if len(pieces) == 1:
        return pieces[0], 0
    half = len(pieces) // 2
    left, hl = _tree(pieces[:half], spec)
    right, hr = _tree(pieces[half:], spec)
    field = compose(left, right, spec)
    height = max(hl, hr) + 1
    budget = field.mass_tol * (height + 1)
    if field.mass_error > budget:
        raise AccuracyError("Mass drift {:.3g} on [{:g}, {:g}] exceeds the budget {:.3g} of level {}."
                            .format(field.mass_error, field.t, field.s, budget, height),
                            diagnostics={'mass_error': field.mass_error, 'budget': budget})
    return field, height


@typechecked
def extend_ck(pieces: List[HeatKernelField], spec: Optional[VariableKernelSpec]=None) -> HeatKernelField:
    """
    Composes kernels on consecutive intervals by dyadic Chapman-Kolmogorov products.

    Parameters
    ----------
    pieces : list of HeatKernelField
      Kernels on [t_0, t_1], [t_1, t_2], ...
    spec : VariableKernelSpec, optional
      Kernel used for the far-field part of each product.

    Returns
    -------
    HeatKernelField
      The kernel on [t_0, t_n]; a single piece is returned unchanged.

    Raises
    ------
    AccuracyError
      When the row masses of a product of height H drift by more than (H + 1) mass_tol.
    """
    if not pieces:
        raise ValueError("At least one piece is required.")
    field, height = _tree(list(pieces), spec)
    logger.info("Chapman-Kolmogorov extension to [%g, %g]: %d pieces, %d levels",
                field.t, field.s, len(pieces), height)
    return field


@typechecked
def heat_kernel(spec: VariableKernelSpec, t: Real, s: Real, eps0: Optional[Real]=None,
                cfg: ParametrixConfig=DEFAULT_PARAMETRIX, bank: Optional[SymbolBank]=None,
                quad: QuadratureConfig=DEFAULT_QUADRATURE) -> HeatKernelField:
    """
    Heat kernel on [t, s], computed directly when s - t <= eps0 and otherwise
    by splitting [t, s] into 2^L equal pieces of length <= eps0.

    Parameters
    ----------
    eps0 : float, optional
      Largest interval solved directly, estimated by `epsilon0` when None.
    """
    if not (0 <= t < s):
        raise DomainError("heat_kernel requires 0 <= t < s.")
    if bank is None:
        bank = SymbolBank(spec, cfg, quad)
    if eps0 is None:
        eps0 = epsilon0(spec, cfg, bank, quad=quad)
    levels = max(int(np.ceil(np.log2((s - t) / eps0) - 1e-12)), 0)
    edges = np.linspace(t, s, 2 ** levels + 1)
    pieces = [assemble_p(spec, solve_q(spec, float(a), float(b), cfg, bank=bank, quad=quad))
              for a, b in zip(edges[:-1], edges[1:])]
    return extend_ck(pieces, spec)


@dataclass
class CKReport:
    """
    Chapman-Kolmogorov residual max |int p_{t,r} p_{r,s} - p_{t,s}| / max p_{t,s} on interior points.
    """
    t: float
    r: float
    s: float
    residual: float
    tol: float

    @property
    def passed(self):
        return self.residual <= self.tol


@typechecked
def ck_residual(spec: VariableKernelSpec, t: Real, s: Real, eps0: Real, r: Optional[Real]=None,
                cfg: ParametrixConfig=DEFAULT_PARAMETRIX, bank: Optional[SymbolBank]=None,
                quad: QuadratureConfig=DEFAULT_QUADRATURE) -> CKReport:
    """
    Compares the kernel on [t, s] with the product of the kernels on [t, r] and [r, s],
    r = t + (s - t)/3 by default, away from the midpoints used by the construction.
    """
    r = t + (s - t) / 3. if r is None else float(r)
    if not (t < r < s):
        raise DomainError("The intermediate time must lie in (t, s).")
    if bank is None:
        bank = SymbolBank(spec, cfg, quad)
    whole = heat_kernel(spec, t, s, eps0, cfg, bank, quad)
    split = compose(heat_kernel(spec, t, r, eps0, cfg, bank, quad),
                    heat_kernel(spec, r, s, eps0, cfg, bank, quad), spec)
    inner = np.ix_(whole.interior, whole.interior)
    residual = float(np.max(np.abs(split.values[inner] - whole.values[inner])) / np.max(whole.values[inner]))
    logger.info("Chapman-Kolmogorov residual on [%g, %g] at r=%g: %.3g", t, s, r, residual)
    return CKReport(float(t), r, float(s), residual, cfg.ck_tol)


# DUHAMEL IDENTITIES

def bump(x, radius=2.):
    """Smooth test function exp(-1/(1 - (x/radius)^2)) supported in [-radius, radius]."""
    x = np.asarray(x, dtype=float) / radius
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    out[inside] = np.exp(-1. / (1. - x[inside] ** 2))
    return out


@dataclass
class DuhamelReport:
    """
    Largest deviation, relative to max |P f - f|, between P_{t,s} f - f and its Duhamel integral.
    """
    form: str
    error: float
    scale: float


@typechecked
def duhamel_check(spec: VariableKernelSpec, t: Real, s: Real, eps0: Real, form: str=FORWARD,
                  f: Optional[Callable]=None, order: int=8, cfg: ParametrixConfig=DEFAULT_PARAMETRIX,
                  bank: Optional[SymbolBank]=None, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> DuhamelReport:
    """
    Checks P_{t,s} f = f + int_t^s L_r P_{r,s} f dr (forward) or
    P_{t,s} f = f + int_t^s P_{t,r} L_r f dr (backward) on interior points,
    with a Gauss-Legendre rule of the given order in r.
    """
    if form not in (FORWARD, BACKWARD):
        raise DomainError("form must be {!r} or {!r}.".format(FORWARD, BACKWARD))
    if bank is None:
        bank = SymbolBank(spec, cfg, quad)
    f = bump if f is None else f
    values = f(bank.x)
    # the pieces near r = t or r = s are shorter than the grid resolves
    inner_cfg = replace(cfg, decay=1.)
    u, w = np.polynomial.legendre.leggauss(order)
    times = t + 0.5 * (s - t) * (u + 1.)
    weights = 0.5 * (s - t) * w

    integral = np.zeros_like(values)
    for r, weight in zip(times, weights):
        if form == FORWARD:
            field = heat_kernel(spec, float(r), s, eps0, inner_cfg, bank, quad)
            integral += weight * bank.generator(r, field.apply(values))
        else:
            field = heat_kernel(spec, t, float(r), eps0, inner_cfg, bank, quad)
            integral += weight * field.apply(bank.generator(r, values))
    change = heat_kernel(spec, t, s, eps0, cfg, bank, quad).apply(values) - values
    inner = np.abs(bank.x) <= 0.5 * cfg.half_width
    scale = float(np.max(np.abs(change[inner])))
    error = float(np.max(np.abs(change[inner] - integral[inner]))) / scale
    logger.info("Duhamel (%s) identity on [%g, %g]: relative error %.3g", form, t, s, error)
    return DuhamelReport(form, error, scale)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
