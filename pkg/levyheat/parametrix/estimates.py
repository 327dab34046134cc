# Created on 2020/10/12

# This module is for the measured constants of the Levi construction: the
# contraction radius epsilon0, the regularity of q and the bounds of p.

# Standard library imports
from dataclasses import dataclass
import logging
from numbers import Real
from typing import Optional, Sequence, Tuple
import warnings

# Third party imports
import numpy as np
from typeguard import typechecked

# Local application imports
from ..exceptions import ConfigurationError
from ..moduli import REGULARLY_VARYING, composite_phi, ell_phi, gamma_ell, h_ell_phi, squared, verify_convolution
from ..profiles import ScalingProfile, rho
from ..quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .kernels import DEFAULT_PARAMETRIX, ParametrixConfig, VariableKernelSpec
from .levi import DefectField, HeatKernelField, QKernel, SymbolBank, assemble_p, solve_q

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


@dataclass
class ContractionConstants:
    """
    Measured constants of the Picard series.

    Attributes
    ----------
    C0 : float
      Largest |q0| / h^{ell^2}_phi over the sampled node pairs.
    C1 : float
      Largest ratio of the convolution inequality of h.
    C2 : float
      2 C1 C0, so that |q^(n)| <= C2^(n+1) Gamma^n h.
    modulus : str
      Modulus used for C1 (ell^2, or ell when ell^2 has index >= 1).
    """
    C0: float
    C1: float
    C2: float
    modulus: str


@typechecked
def contraction_constants(spec: VariableKernelSpec, cfg: ParametrixConfig=DEFAULT_PARAMETRIX,
                          bank: Optional[SymbolBank]=None, horizon: Real=1.,
                          quad: QuadratureConfig=DEFAULT_QUADRATURE) -> ContractionConstants:
    """
    Estimates C0 from the defect kernel on [0, horizon] and C1 from the convolution
    inequality at (horizon, horizon/2) and (horizon/4, horizon/8).
    """
    if bank is None:
        bank = SymbolBank(spec, cfg, quad)
    C0 = DefectField(spec, 0., float(horizon), cfg, bank, quad).defect_ratio()
    sq = squared(spec.modulus)
    m = sq if REGULARLY_VARYING in sq.class_tag and sq.alpha < 1 else spec.modulus
    C1 = max(verify_convolution(m, m, spec.profile, t, 0.5 * t, quad=quad).dk1_max
             for t in (float(horizon), 0.25 * float(horizon)))
    constants = ContractionConstants(C0, C1, 2. * C1 * C0, m.name)
    logger.info("Contraction constants of %s: C0=%.4g, C1=%.4g, C2=%.4g", spec.name, C0, C1, constants.C2)
    return constants


@typechecked
def epsilon0(spec: VariableKernelSpec, cfg: ParametrixConfig=DEFAULT_PARAMETRIX,
             bank: Optional[SymbolBank]=None, horizon: Real=1., constants: Optional[ContractionConstants]=None,
             quad: QuadratureConfig=DEFAULT_QUADRATURE) -> float:
    """
    Largest dyadic eps <= horizon with Gamma_{ell^2_phi}(eps) <= 1/(2 C2), halved once more.

    Examples
    --------
      For ell(r) = r^(1/2) and phi(r) = r, Gamma_{ell^2_phi}(t) = t.
    """
    if constants is None:
        constants = contraction_constants(spec, cfg, bank, horizon, quad)
    top = 2. ** np.floor(np.log2(float(horizon)))
    if constants.C2 == 0:
        return 0.5 * top
    target = 1. / (2. * constants.C2)
    m = composite_phi(squared(spec.modulus), spec.profile)
    eps = top
    for _ in range(64):
        if gamma_ell(m, eps, quad) <= target:
            logger.info("epsilon0 of %s: %.6g", spec.name, 0.5 * eps)
            return 0.5 * eps
        eps *= 0.5
    warnings.warn("Gamma does not fall below {:.3g} for eps >= {:.3g}.".format(target, eps))
    return 0.5 * eps


# REGULARITY AND BOUNDS

@dataclass
class HolderReport:
    """
    Largest ratio |q(x,y) - q(x',y)| ell_phi(s-t) / (ell(|x-x'|) (h^ell_phi(x-y) + h^ell_phi(x'-y))),
    per spatial shift |x - x'|.
    """
    shifts: np.ndarray
    ratios: np.ndarray

    @property
    def ratio_max(self):
        return float(np.max(self.ratios))


@typechecked
def holder_sweep(q: QKernel, shifts: Sequence[int]=(1, 2, 4, 8, 16)) -> HolderReport:
    """
    Measures the regularity of x -> q(t, s, x, y) on interior points.
    """
    defect = q.defect
    spec, ell = defect.spec, defect.spec.modulus
    length = defect.s - defect.t
    n_x, h = defect.cfg.n_x, defect.step
    weight = h_ell_phi(ell, spec.profile, length, h * np.arange(n_x))
    dist = np.abs(np.arange(n_x)[:, None] - np.arange(n_x)[None, :])
    H = weight[dist]
    scale = ell_phi(ell, spec.profile, length)
    values = q.values[0]
    inner = np.flatnonzero(np.abs(defect.x) <= 0.5 * defect.cfg.half_width)
    ratios = []
    for d in shifts:
        rows = inner[inner + d <= inner[-1]]
        cols = inner
        num = np.abs(values[np.ix_(rows + d, cols)] - values[np.ix_(rows, cols)])
        den = ell(d * h) * (H[np.ix_(rows + d, cols)] + H[np.ix_(rows, cols)]) / scale
        ratios.append(float(np.max(num / den)))
    return HolderReport(np.asarray(shifts), np.asarray(ratios))


@dataclass
class NearDiagonalReport:
    """
    Measured c1 = min over |x-y| <= phi^{-1}(L) of p phi^{-1}(L) for interval lengths L,
    and the chosen delta.
    """
    lengths: np.ndarray
    c1: np.ndarray
    delta: float


@typechecked
def near_diagonal_sweep(spec: VariableKernelSpec, eps0: Real, cfg: ParametrixConfig=DEFAULT_PARAMETRIX,
                        bank: Optional[SymbolBank]=None, levels: int=4,
                        quad: QuadratureConfig=DEFAULT_QUADRATURE) -> NearDiagonalReport:
    """
    Near-diagonal lower bound on [0, eps0 2^-k], k < levels; delta is the largest length
    whose c1 is positive and at least half of the c1 of the next shorter length.
    Lengths the grid cannot resolve end the sweep.
    """
    if bank is None:
        bank = SymbolBank(spec, cfg, quad)
    lengths, c1 = [], []
    for k in range(levels):
        L = float(eps0) * 2. ** (-k)
        try:
            field = assemble_p(spec, solve_q(spec, 0., L, cfg, bank=bank, quad=quad))
        except ConfigurationError as err:
            logger.info("Near-diagonal sweep stops at length %g: %s", L, err)
            break
        a = spec.profile.inverse(L)
        inner = field.interior
        near = (np.abs(field.x[:, None] - field.x[None, :]) <= a) & inner[:, None] & inner[None, :]
        lengths.append(L)
        c1.append(float(np.min(field.values[near])) * a)
    delta = 0.
    for k, (L, c) in enumerate(zip(lengths, c1)):
        if c > 0 and (k == len(c1) - 1 or c >= 0.5 * c1[k + 1]):
            delta = L
            break
    return NearDiagonalReport(np.asarray(lengths), np.asarray(c1), delta)


@typechecked
def two_sided_ratio(field: HeatKernelField, profile: ScalingProfile, reach: Real=20.) -> Tuple[float, float]:
    """
    Range of p / ((s-t) rho_phi(s-t, x-y)) over interior points with |x-y| <= reach phi^{-1}(s-t).
    """
    length = field.s - field.t
    a = profile.inverse(length)
    dist = np.abs(field.x[:, None] - field.x[None, :])
    inner = field.interior
    mask = (dist <= reach * a) & inner[:, None] & inner[None, :]
    ratio = field.values[mask] / (length * rho(profile, length, dist[mask]))
    return float(np.min(ratio)), float(np.max(ratio))


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
