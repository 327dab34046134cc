# Created on 2020/7/20

# This module is for Fourier transform implementations: frequency grids,
# inverse transforms of characteristic functions and spectral derivatives.

# Standard library imports
from dataclasses import dataclass
import logging

# Third party imports
import numpy as np
from typeguard import typechecked

# Local application imports
# /

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


@dataclass(frozen=True)
class FourierGrid:
    """
    Uniform spatial grid centered at the origin and its dual frequency grid.

    Attributes
    ----------
    n : int
      Points per axis (a power of two).
    step : float
      Spatial step h; the frequency step is 2 pi / (n h).
    d : int
      Dimension (1 or 2).
    """
    n: int
    step: float
    d: int = 1

    @property
    def origin(self):
        return -0.5 * self.n * self.step

    @property
    def length(self):
        return self.n * self.step

    @property
    def nyquist(self):
        return np.pi / self.step

    def axis(self):
        """Spatial nodes x_j = origin + j h along one axis."""
        return self.origin + self.step * np.arange(self.n)

    def frequency_axis(self):
        """Frequencies in numpy FFT order."""
        return 2. * np.pi * np.fft.fftfreq(self.n, d=self.step)

    def points(self):
        """Spatial nodes, shape (n,) in d=1 and (n, n, 2) in d=2."""
        x = self.axis()
        if self.d == 1:
            return x
        X1, X2 = np.meshgrid(x, x, indexing='ij')
        return np.stack([X1, X2], axis=-1)

    def frequencies(self):
        """Frequencies, shape (n,) in d=1 and (n, n, 2) in d=2, in FFT order."""
        xi = self.frequency_axis()
        if self.d == 1:
            return xi
        K1, K2 = np.meshgrid(xi, xi, indexing='ij')
        return np.stack([K1, K2], axis=-1)


@typechecked
def make_grid(n: int, step: float, d: int=1) -> FourierGrid:
    """
    Builds a FourierGrid after checking n is a power of two.
    """
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError("Grid size must be a power of two, got {}.".format(n))
    if step <= 0:
        raise ValueError("Grid step must be positive.")
    if d not in (1, 2):
        raise ValueError("Fourier grids are implemented for d in {1, 2}.")
    return FourierGrid(n, float(step), d)


def _phase(grid, xi):
    if grid.d == 1:
        return np.exp(-1j * xi * grid.origin)
    return np.exp(-1j * grid.origin * (xi[..., 0] + xi[..., 1]))


@typechecked
def inverse_transform(grid: FourierGrid, cf: np.ndarray) -> np.ndarray:
    """
    Samples (2 pi)^-d times the integral of exp(-i xi.x) cf(xi) on the spatial grid.

    Parameters
    ----------
    grid : FourierGrid
      Grid.
    cf : numpy.ndarray
      Characteristic function on `grid.frequencies()` (FFT order).

    Returns
    -------
    numpy.ndarray
      Real part of the inverse transform on `grid.points()`.

    Notes
    -----
      The trapezoid rule on the frequency lattice returns the periodization of the
      density with period n h; aliasing is corrected by the caller.
    """
    xi = grid.frequencies()
    weighted = cf * _phase(grid, xi)
    if grid.d == 1:
        values = np.fft.fft(weighted)
    else:
        values = np.fft.fft2(weighted)
    return values.real / grid.length ** grid.d


@typechecked
def spectral_derivative(grid: FourierGrid, cf: np.ndarray, axis: int=0) -> np.ndarray:
    """
    Derivative along `axis` of the inverse transform, by multiplying cf with -i xi.
    """
    xi = grid.frequencies()
    component = xi if grid.d == 1 else xi[..., axis]
    return inverse_transform(grid, -1j * component * cf)


@typechecked
def inverse_transform_at(grid: FourierGrid, cf: np.ndarray, points: np.ndarray, chunk: int=256) -> np.ndarray:
    """
    Same trapezoid sum as `inverse_transform`, evaluated at arbitrary points.

    Parameters
    ----------
    points : numpy.ndarray
      Shape (m,) in d=1, (m, 2) in d=2.
    chunk : int
      Number of points summed at once.
    """
    xi = grid.frequencies().reshape(-1, grid.d)
    c = cf.reshape(-1)
    pts = np.asarray(points, dtype=float).reshape(-1, grid.d)
    out = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], chunk):
        block = pts[start:start + chunk]
        phase = np.exp(-1j * block @ xi.T)
        out[start:start + chunk] = (phase @ c).real
    return out / grid.length ** grid.d


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
