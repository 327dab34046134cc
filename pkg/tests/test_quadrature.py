# Solving relative path problem
import sys
from os import path
sys.path.append(path.join(path.dirname(__file__), '..'))

# Import Unittest
import unittest

# Import third party packages
import numpy as np

# Import my package
from levyheat import quadrature as qd


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


class TestQuadrature(unittest.TestCase):
    """
    Tests the integrals toward singular ends in quadrature.py.
    """

    @classmethod
    def setUpClass(cls):
        pass

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_quad_log(self):
        self.assertAlmostEqual(qd.quad_log(lambda r: 1. / r, 1., np.e), 1., places=10)
        self.assertAlmostEqual(qd.quad_linear(lambda r: r, 0., 2.), 2., places=12)

    def test_integrate_to_zero(self):
        value = qd.integrate_to_zero(lambda r: r ** -0.5, 1.)
        self.assertFalse(qd.is_divergent(value))
        self.assertAlmostEqual(value, 2., places=8)

    def test_integrate_to_zero_divergent(self):
        value = qd.integrate_to_zero(lambda r: 1. / r, 1., quantity="log")
        self.assertTrue(qd.is_divergent(value))
        self.assertEqual(value.quantity, "log")

    def test_integrate_to_infinity(self):
        self.assertAlmostEqual(qd.integrate_to_infinity(lambda r: r ** -2, 1.), 1., places=8)
        self.assertTrue(qd.is_divergent(qd.integrate_to_infinity(lambda r: 1. / r, 1.)))

    def test_integrate_positive_axis(self):
        # int_0^inf (r^2 ^ 1)/r^2 dr = 1 + 1
        value = qd.integrate_positive_axis(lambda r: min(r * r, 1.) / (r * r))
        self.assertAlmostEqual(value, 2., places=8)

    def test_divergent_marker(self):
        self.assertEqual(qd.Divergent("a"), qd.Divergent("b"))
        self.assertFalse(qd.is_divergent(1.))

    def test_assess_series_pending(self):
        verdict = qd.assess_series([1., 0.5], [0.5, 1.5])
        self.assertEqual(verdict.status, 'pending')

    def test_bad_limits(self):
        with self.assertRaises(ValueError):
            qd.integrate_to_zero(lambda r: r, 0.)
        with self.assertRaises(ValueError):
            qd.integrate_to_infinity(lambda r: r, -1.)


if __name__ == '__main__':
    unittest.main()
