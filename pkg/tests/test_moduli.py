# Solving relative path problem
import sys
from os import path
sys.path.append(path.join(path.dirname(__file__), '..'))

# Import Unittest
import unittest

# Import third party packages
import numpy as np

# Import my package
from levyheat import moduli as md
from levyheat.exceptions import ConfigurationError, DivergenceError, DomainError
from levyheat.profiles import power_law


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


class TestModuli(unittest.TestCase):
    """
    Tests the continuity moduli in moduli.py.
    """

    @classmethod
    def setUpClass(cls):
        cls.cauchy = power_law(1.)
        cls.sqrt = md.power(0.5)

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_extension_beyond_one(self):
        self.assertEqual(self.sqrt(4.), 1.)
        np.testing.assert_allclose(self.sqrt(np.array([0.25, 1., 9.])), [0.5, 1., 1.])

    def test_gamma_ell(self):
        self.assertAlmostEqual(md.gamma_ell(self.sqrt, 1.), 2., places=8)
        self.assertAlmostEqual(md.gamma_ell(self.sqrt, 0.25), 1., places=8)
        with self.assertRaises(DivergenceError):
            md.gamma_ell(md.constant(), 1.)
        with self.assertRaises(DomainError):
            md.gamma_ell(self.sqrt, 0.)

    def test_M_phi_ell_power(self):
        # alpha/(alpha+eta-1) + alpha/(2 alpha-1) with alpha = 1, eta = 1/2
        for t in (1e-3, 0.1, 1.):
            self.assertAlmostEqual(md.M_phi_ell(self.sqrt, self.cauchy, t), 3., places=6)
        with self.assertRaises(DomainError):
            md.M_phi_ell(self.sqrt, self.cauchy, 2.)

    def test_check_dini(self):
        self.assertTrue(md.check_dini(self.sqrt))
        self.assertFalse(md.check_dini(md.constant(2.)))
        decreasing = md.Modulus(lambda t: 1. / (1. + t), family='decreasing')
        self.assertFalse(md.check_dini(decreasing))

    def test_class_tags(self):
        self.assertEqual(md.verify_class_tag(self.sqrt), {md.DINI: True, md.REGULARLY_VARYING: True})
        tags = md.verify_class_tag(md.log_power(1.))
        self.assertTrue(tags[md.SLOWLY_VARYING])
        self.assertTrue(tags[md.REGULARLY_VARYING])
        self.assertAlmostEqual(md.s0_limit(self.sqrt, 4.), 2., places=8)

    def test_potter_bound(self):
        c = md.potter_bound(md.log_power(1.), 0.1)
        self.assertGreaterEqual(c, 1.)
        with self.assertRaises(DomainError):
            md.potter_bound(self.sqrt, 0.1)

    def test_h_ell_phi(self):
        # ell(1 + 0) rho(1, 0) with phi^{-1}(1) = 1
        self.assertAlmostEqual(md.h_ell_phi(self.sqrt, self.cauchy, 1., 0.), 1., places=12)
        self.assertAlmostEqual(md.h_ell_phi(self.sqrt, self.cauchy, 0.25, 0.), 0.5 * 16., places=12)
        self.assertAlmostEqual(md.ell_phi(self.sqrt, self.cauchy, 0.25), 0.5, places=12)
        with self.assertRaises(DomainError):
            md.ell_phi(self.sqrt, self.cauchy, 0.)

    def test_combinations(self):
        m = md.maximum(self.sqrt, md.power(0.25))
        self.assertAlmostEqual(m(0.0625), 0.5, places=12)
        self.assertAlmostEqual(md.product(self.sqrt, self.sqrt)(0.09), 0.09, places=12)
        self.assertAlmostEqual(md.scaled(self.sqrt, 3.)(0.25), 1.5, places=12)

    def test_config(self):
        m = md.modulus_from_config({'family': 'maximum', 'params': {
            'm1': {'family': 'power', 'params': {'eta': 0.5}},
            'm2': {'family': 'log_power', 'params': {'a': -2.}}}})
        n = md.modulus_from_config(m.to_config())
        self.assertAlmostEqual(m(0.3), n(0.3), places=14)
        with self.assertRaises(ConfigurationError):
            md.modulus_from_config({'family': 'power', 'params': {}})
        with self.assertRaises(ConfigurationError):
            md.modulus_from_config({'family': 'holder'})

    def test_convolution(self):
        report = md.verify_convolution(self.sqrt, md.power(0.25), self.cauchy, 1., 0.5, grid=[0., 1.])
        self.assertTrue(report.passed)
        self.assertEqual(len(report.dk1_ratios), 2)
        self.assertAlmostEqual(report.rhs_terms[0], report.rhs_terms[1], places=12)
        with self.assertRaises(DomainError):
            md.verify_convolution(md.power(1.), self.sqrt, self.cauchy, 1., 0.5)
        with self.assertRaises(DomainError):
            md.verify_convolution(self.sqrt, self.sqrt, self.cauchy, 1., 1.)


if __name__ == '__main__':
    unittest.main()
