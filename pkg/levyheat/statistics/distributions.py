# Created on 2020/10/15

# This module is for the reference distributions the samplers are compared with.

# Standard library imports
# /

# Third party imports
import numpy as np
import matplotlib.pyplot as plt
import pandas as pd
from scipy.interpolate import PchipInterpolator

# Local application imports
from ..exceptions import DomainError


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


class Distribution:
    """
    Base class of the one-dimensional laws the samples are tested against.

    Attributes
    ----------
    type : str
      Family of the law.
    support : str
      Support, 'R' for the laws of the package.
    median : float
      Median.
    mode : float
      Mode.
    name : str
      Label used in reports and plots.

    Notes
    -----
      Jump laws of index <= 1 have no mean, so no moments are stored.
    """

    def __init__(self, name=""):
        self.type = None
        self.support = None
        self.median = None
        self.mode = None
        self.name = name

    def info(self):
        """
        Summary of the law as a pandas Series.
        """
        return pd.Series({'name': self.name, 'type': self.type, 'support': self.support,
                          'median': self.median, 'mode': self.mode})

    def plot(self, x, ax=None, cumulative=False):
        """
        Plots the PDF (or the CDF) at the points x.
        """
        if ax is None:
            _, ax = plt.subplots(figsize=(10, 5))
        x = np.asarray(x, dtype=float)
        ax.plot(x, self.cdf(x) if cumulative else self.pdf(x), label=self.name or self.type)
        ax.set_xlabel('x')
        ax.legend()
        return ax


# REFERENCE LAWS

class Cauchy(Distribution):
    """
    Cauchy law with location 'a' and scale 'b' (>0).

    For kappa = 1 and phi(r) = r in d=1, the frozen density on [t, s]
    is this law with a = 0 and b = pi (s - t).

    Attributes
    ----------
    a : float
      Location, equal to the median and the mode.
    b : float
      Scale (>0).
    entropy : float
      Differential entropy, log(4 pi b).
    """

    def __init__(self, a=0., b=1., name=""):
        if b <= 0:
            raise ValueError("The scale b must be positive.")
        super().__init__(name)
        self.type = 'Cauchy'
        self.support = 'R'
        self.a = float(a)
        self.b = float(b)
        self.median = self.mode = self.a
        self.entropy = np.log(4 * np.pi * self.b)

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.a) / self.b
        return 1. / (np.pi * self.b) / (1. + z ** 2)

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.a) / self.b
        return 0.5 + np.arctan(z) / np.pi

    def quantile(self, p):
        """
        Inverse CDF, for p in the open interval (0, 1).
        """
        p = np.asarray(p, dtype=float)
        if np.any((p <= 0) | (p >= 1)):
            raise ValueError("Probabilities must lie in (0, 1).")
        return self.a + self.b * np.tan(np.pi * (p - 0.5))

    def characteristic_function(self, xi):
        # exp(i a xi - b |xi|)
        xi = np.asarray(xi, dtype=float)
        return np.exp(1j * self.a * xi - self.b * np.abs(xi))


class GridDistribution(Distribution):
    """
    Distribution of a sampled density (d=1) with its tail masses.

    Attributes
    ----------
    density : GridDensity
      Density on a grid.
    x : numpy.ndarray
      Grid.
    F : numpy.ndarray
      Distribution function at the grid points.

    Notes
    -----
      Outside the grid the CDF is held at its edge values, so its error there
      is bounded by the tail masses.
    """

    def __init__(self, density, name=""):
        if density.d != 1:
            raise DomainError("GridDistribution requires a density in d=1.")
        super().__init__(name if name else density.kernel_id)
        self.type = 'Grid'
        self.support = 'R'
        self.density = density
        self.x = density.x
        self.F = np.clip(density.cdf(), 0., 1.)
        self.median = float(self.quantile(0.5))
        self.mode = float(self.x[int(np.argmax(density.values))])

    def pdf(self, x):
        return self.density.at(np.asarray(x, dtype=float).reshape(-1)).reshape(np.shape(x))

    def cdf(self, x):
        return np.interp(np.asarray(x, dtype=float), self.x, self.F)

    def quantile(self, p):
        """Inverse of the CDF by monotone interpolation; p must lie within the grid's range of F."""
        p = np.asarray(p, dtype=float)
        keep = np.concatenate([[True], np.diff(self.F) > 0])
        inverse = PchipInterpolator(self.F[keep], self.x[keep], extrapolate=False)
        out = inverse(p)
        if np.any(np.isnan(out)):
            raise DomainError("Probabilities outside [{:.3g}, {:.3g}] are not resolved by the grid."
                              .format(self.F[0], self.F[-1]))
        return out


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
