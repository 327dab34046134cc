# Solving relative path problem
import sys
from os import path
sys.path.append(path.join(path.dirname(__file__), '..'))

# Import Unittest
import unittest

# Import third party packages
import numpy as np

# Import my package
from levyheat import fouriertrf as ft


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


def gaussian_cf(xi):
    if xi.ndim > 1:
        return np.exp(-0.5 * np.sum(xi ** 2, axis=-1))
    return np.exp(-0.5 * xi ** 2)


class TestFouriertrf(unittest.TestCase):
    """
    Tests the functions in fouriertrf.py.
    """

    @classmethod
    def setUpClass(cls):
        cls.grid = ft.make_grid(256, 0.1)

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_make_grid(self):
        self.assertAlmostEqual(self.grid.origin, -12.8, places=12)
        self.assertAlmostEqual(self.grid.nyquist, np.pi / 0.1, places=10)
        self.assertEqual(self.grid.points().shape, (256,))
        self.assertEqual(ft.make_grid(8, 1., 2).points().shape, (8, 8, 2))
        with self.assertRaises(ValueError):
            ft.make_grid(100, 0.1)
        with self.assertRaises(ValueError):
            ft.make_grid(128, -1.)
        with self.assertRaises(ValueError):
            ft.make_grid(128, 0.1, 3)

    def test_inverse_transform_gaussian(self):
        x = self.grid.axis()
        values = ft.inverse_transform(self.grid, gaussian_cf(self.grid.frequencies()))
        np.testing.assert_allclose(values, np.exp(-0.5 * x ** 2) / np.sqrt(2. * np.pi), atol=1e-12)

    def test_inverse_transform_shift(self):
        xi = self.grid.frequencies()
        values = ft.inverse_transform(self.grid, np.exp(1j * xi) * gaussian_cf(xi))
        self.assertAlmostEqual(self.grid.axis()[np.argmax(values)], 1., places=10)

    def test_spectral_derivative(self):
        x = self.grid.axis()
        values = ft.spectral_derivative(self.grid, gaussian_cf(self.grid.frequencies()))
        np.testing.assert_allclose(values, -x * np.exp(-0.5 * x ** 2) / np.sqrt(2. * np.pi), atol=1e-12)

    def test_inverse_transform_at(self):
        cf = gaussian_cf(self.grid.frequencies())
        points = np.array([0., 0.05, 1.33])
        values = ft.inverse_transform_at(self.grid, cf, points)
        np.testing.assert_allclose(values, np.exp(-0.5 * points ** 2) / np.sqrt(2. * np.pi), atol=1e-12)

    def test_two_dimensions(self):
        grid = ft.make_grid(64, 0.25, 2)
        values = ft.inverse_transform(grid, gaussian_cf(grid.frequencies()))
        r2 = np.sum(grid.points() ** 2, axis=-1)
        np.testing.assert_allclose(values, np.exp(-0.5 * r2) / (2. * np.pi), atol=1e-10)
        self.assertAlmostEqual(values.sum() * grid.step ** 2, 1., places=10)


if __name__ == '__main__':
    unittest.main()
