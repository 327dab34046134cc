# Created on 2020/10/15

# This module is for the goodness-of-fit statistics comparing samples with densities.

# Standard library imports
from dataclasses import dataclass
import logging
from numbers import Real
from typing import Callable

# Third party imports
import numpy as np
import scipy.stats as ss
from typeguard import typechecked

# Local application imports
# /

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


@dataclass
class KSResult:
    """
    One-sample Kolmogorov-Smirnov test.

    Attributes
    ----------
    distance : float
      sup |F_n - F|.
    critical : float
      Critical value at level alpha for n samples.
    pvalue : float
      p-value of the distance.
    n : int
      Sample size.
    alpha : float
      Level of the test.
    """
    distance: float
    critical: float
    pvalue: float
    n: int
    alpha: float

    @property
    def passed(self):
        return self.distance <= self.critical


@typechecked
def ks_critical_value(n: int, alpha: Real=0.05) -> float:
    """
    Critical value of the one-sample KS distance, the (1 - alpha) quantile of its exact law.

    Examples
    --------
      For large n at alpha = 0.05 the value approaches 1.358/sqrt(n).
    """
    if n < 1 or not 0 < alpha < 1:
        raise ValueError("Requires n >= 1 and 0 < alpha < 1.")
    return float(ss.kstwo.ppf(1. - alpha, n))


@typechecked
def ks_distance(samples, cdf: Callable, alpha: Real=0.05) -> KSResult:
    """
    Kolmogorov-Smirnov distance between one-dimensional samples and a distribution function.
    """
    x = np.asarray(samples, dtype=float).reshape(-1)
    res = ss.kstest(x, cdf)
    result = KSResult(float(res.statistic), ks_critical_value(x.size, alpha), float(res.pvalue), x.size, float(alpha))
    logger.info("KS distance %.5f (critical %.5f, n=%d)", result.distance, result.critical, result.n)
    return result


def empirical_cf(samples, xi):
    """
    Empirical characteristic function mean(exp(i xi.X)) at the frequencies xi.

    Parameters
    ----------
    samples : array_like
      Shape (n,) or (n, d).
    xi : array_like
      Shape (m,) or (m, d).
    """
    x = np.asarray(samples, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if x.ndim == 1 or x.shape[1] == 1:
        phase = np.outer(xi.reshape(-1), x.reshape(-1))
    else:
        phase = xi.reshape(-1, x.shape[1]) @ x.T
    return np.exp(1j * phase).mean(axis=1)


@dataclass
class CFCheck:
    """Largest |empirical cf - exp(Psi)| over the frequencies, against 4/sqrt(n)."""
    xi: np.ndarray
    deviation: np.ndarray
    bound: float

    @property
    def worst(self):
        return float(np.max(self.deviation))

    @property
    def passed(self):
        return self.worst <= self.bound


def cf_check(samples, xi, exponent) -> CFCheck:
    """
    Compares the empirical characteristic function with exp(exponent) at xi.
    """
    ecf = empirical_cf(samples, xi)
    target = np.exp(np.asarray(exponent, dtype=complex).reshape(-1))
    n = np.asarray(samples).shape[0]
    return CFCheck(np.asarray(xi, dtype=float), np.abs(ecf - target), 4. / np.sqrt(n))


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
