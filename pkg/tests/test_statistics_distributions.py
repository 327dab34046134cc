# Solving relative path problem
import sys
from os import path
sys.path.append(path.join(path.dirname(__file__), '..'))

# Import Unittest
import unittest

# Import third party packages
import numpy as np

# Import my package
from levyheat.exceptions import DomainError
from levyheat.frozen import constant_kernel, density_fft
from levyheat.profiles import power_law
from levyheat.statistics import distributions as dis
from levyheat.statistics import statistics as st


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


class TestCauchy(unittest.TestCase):
    """
    Tests the class Cauchy.
    """

    @classmethod
    def setUpClass(cls):
        pass

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):

        # Test ValueError
        with self.assertRaises(ValueError):
            dis.Cauchy(a=0., b=-1.)

        # For the later tests
        self.d1 = dis.Cauchy(a=1., b=2., name="MyCauchy")

    def tearDown(self):
        pass

    def test_attributes(self):
        self.assertEqual(self.d1.name, "MyCauchy")
        self.assertEqual(self.d1.type, 'Cauchy')
        self.assertEqual(self.d1.support, 'R')
        self.assertEqual(self.d1.median, 1.)
        self.assertEqual(self.d1.mode, 1.)
        self.assertAlmostEqual(self.d1.entropy, np.log(8. * np.pi), places=12)
        self.assertEqual(self.d1.info()['median'], 1.)

    def test_pdf_cdf(self):
        self.assertAlmostEqual(self.d1.pdf(1.), 1. / (2. * np.pi), places=12)
        self.assertEqual(self.d1.cdf(1.), 0.5)
        self.assertAlmostEqual(self.d1.cdf(3.), 0.75, places=12)

    def test_quantile(self):
        self.assertAlmostEqual(self.d1.quantile(0.75), 3., places=12)
        self.assertAlmostEqual(self.d1.cdf(self.d1.quantile(0.1)), 0.1, places=12)
        with self.assertRaises(ValueError):
            self.d1.quantile(1.)

    def test_characteristic_function(self):
        self.assertAlmostEqual(abs(self.d1.characteristic_function(0.5)), np.exp(-1.), places=12)


class TestGridDistribution(unittest.TestCase):
    """
    Tests the class GridDistribution on the density of kappa = 1, phi(r) = r.
    """

    @classmethod
    def setUpClass(cls):
        cls.density = density_fft(constant_kernel(power_law(1.)), 0., 1.)
        cls.reference = dis.Cauchy(0., np.pi)

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        self.d1 = dis.GridDistribution(self.density)

    def tearDown(self):
        pass

    def test_attributes(self):
        self.assertEqual(self.d1.type, 'Grid')
        self.assertAlmostEqual(self.d1.median, 0., delta=1e-3)
        self.assertAlmostEqual(self.d1.mode, 0., delta=self.density.step)

    def test_cdf(self):
        x = np.array([-10., -1., 0., 2., 25.])
        np.testing.assert_allclose(self.d1.cdf(x), self.reference.cdf(x), atol=5e-4)

    def test_pdf(self):
        x = np.array([0., 1.5])
        np.testing.assert_allclose(self.d1.pdf(x), self.reference.pdf(x), atol=1e-4)

    def test_quantile(self):
        self.assertAlmostEqual(float(self.d1.quantile(0.75)), np.pi, delta=1e-2)
        with self.assertRaises(DomainError):
            self.d1.quantile(1e-12)


class TestStatistics(unittest.TestCase):
    """
    Tests the functions in statistics.py.
    """

    @classmethod
    def setUpClass(cls):
        cls.reference = dis.Cauchy(0., 1.)
        cls.samples = cls.reference.quantile((np.arange(2000) + 0.5) / 2000)

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_ks_critical_value(self):
        self.assertAlmostEqual(st.ks_critical_value(10000) * 100., 1.358, delta=2e-3)
        self.assertGreater(st.ks_critical_value(100, 0.01), st.ks_critical_value(100, 0.05))
        with self.assertRaises(ValueError):
            st.ks_critical_value(0)

    def test_ks_distance(self):
        # Midpoint quantiles are at distance 1/(2n) from the CDF
        result = st.ks_distance(self.samples, self.reference.cdf)
        self.assertAlmostEqual(result.distance, 0.5 / 2000, places=10)
        self.assertTrue(result.passed)
        shifted = st.ks_distance(self.samples + 1., self.reference.cdf)
        self.assertFalse(shifted.passed)

    def test_cf_check(self):
        xi = np.array([0.5, 1., 2.])
        result = st.cf_check(self.samples, xi, -np.abs(xi))
        self.assertTrue(result.passed)
        self.assertAlmostEqual(result.bound, 4. / np.sqrt(2000), places=14)
        np.testing.assert_allclose(st.empirical_cf(np.zeros(5), xi), [1., 1., 1.])


if __name__ == '__main__':
    unittest.main()
