# Solving relative path problem
import sys
from os import path
sys.path.append(path.join(path.dirname(__file__), '..'))

# Import Unittest
import unittest

# Import standard library
from dataclasses import FrozenInstanceError

# Import third party packages
import numpy as np

# Import my package
from levyheat import profiles as pf
from levyheat.exceptions import ConfigurationError, DomainError, ModelError
from levyheat.quadrature import is_divergent


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


class TestProfiles(unittest.TestCase):
    """
    Tests the scaling profiles in profiles.py.
    """

    @classmethod
    def setUpClass(cls):
        cls.cauchy = pf.power_law(1.)

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_eval(self):
        p = pf.power_law(1.5)
        self.assertAlmostEqual(pf.eval_phi(p, 4.), 8., places=12)
        self.assertAlmostEqual(pf.eval_phi_inverse(p, 8.), 4., places=10)
        self.assertEqual(pf.eval_phi_inverse(p, 0.), 0.)
        with self.assertRaises(DomainError):
            pf.eval_phi(p, -1.)
        with self.assertRaises(DomainError):
            p.inverse(-2.)

    def test_inverse_piecewise(self):
        p = pf.piecewise_power(0.5, 1.5)
        for t in (1e-6, 0.3, 1., 7.):
            self.assertAlmostEqual(float(p.phi(p.inverse(t))) / t, 1., places=10)

    def test_classify_case(self):
        self.assertEqual(pf.classify_case(pf.power_law(0.5)), pf.CASE1)
        self.assertEqual(pf.classify_case(self.cauchy), pf.CASE2)
        self.assertEqual(pf.classify_case(pf.power_law(1.5)), pf.CASE3)
        self.assertEqual(self.cauchy.compensator_mode, pf.COMPENSATOR_TRUNCATED)
        np.testing.assert_array_equal(self.cauchy.compensator([0.5, 2.]), [1., 0.])

    def test_c0(self):
        # int_0^1 r/r dr + int_1^inf 1/r^2 dr
        self.assertAlmostEqual(pf.c0_phi(self.cauchy), 2., places=8)

    def test_A_phi_closed_form(self):
        self.assertAlmostEqual(pf.compute_A_phi(self.cauchy, 0), 2., places=6)
        p = pf.power_law(0.5)
        self.assertAlmostEqual(pf.compute_A_phi(p, 0), 1. / 1.5 + 2., places=6)

    def test_A_phi_divergent(self):
        p = pf.piecewise_power(1., 2.)
        self.assertEqual(p.case_tag, pf.CASE3)
        self.assertTrue(is_divergent(pf.compute_A_phi(p, 1)))
        with self.assertRaises(DomainError):
            pf.compute_A_phi(p, 2)

    def test_scaling_bounds(self):
        self.assertTrue(pf.verify_scaling_bounds(pf.power_law(1.2)).passed)
        self.assertTrue(pf.verify_scaling_bounds(pf.piecewise_power(0.5, 1.5)).passed)
        wrong = pf.from_callable(lambda r: r ** 1.5, 1.2, 1.2)
        report = pf.verify_scaling_bounds(wrong)
        self.assertFalse(report.passed)
        self.assertGreater(report.upper_ratio, 1.)

    def test_rho(self):
        self.assertAlmostEqual(pf.rho(self.cauchy, 1., 0.), 1., places=12)
        self.assertAlmostEqual(pf.rho(self.cauchy, 1., 1.), 0.5, places=12)
        np.testing.assert_allclose(pf.rho(self.cauchy, 0.5, np.array([0., 2.])), [4., 1. / 4.25])
        with self.assertRaises(DomainError):
            pf.rho(self.cauchy, 0., 1.)

    def test_comparability(self):
        c = pf.comparability_constant(pf.power_law(1.))
        self.assertGreaterEqual(c, 1.)
        self.assertLess(c, 10.)

    def test_rescaled_power_law(self):
        p = pf.power_law(0.8)
        q = p.rescaled(0.3)
        self.assertAlmostEqual(float(q.phi(2.)), 2. ** 0.8, places=10)
        self.assertEqual(q.case_tag, p.case_tag)

    def test_shape_checks(self):
        with self.assertRaises(ModelError):
            pf.from_callable(lambda r: 2. * r, 1., 1.)
        with self.assertRaises(ValueError):
            pf.power_law(2.5)

    def test_config(self):
        p = pf.piecewise_power(0.5, 1.5, name="pp")
        q = pf.profile_from_config(p.to_config())
        self.assertEqual(q.name, "pp")
        self.assertAlmostEqual(float(q.phi(3.)), 3. ** 1.5, places=12)
        with self.assertRaises(ConfigurationError):
            pf.profile_from_config({'family': 'unknown'})
        with self.assertRaises(ConfigurationError):
            pf.profile_from_config({'family': 'power_law', 'params': {}})

    def test_other_families(self):
        for p in (pf.power_mixture([0.5, 1.5], [1., 1.]), pf.harmonic_mixture([0.5, 1.5], [1., 3.]),
                  pf.log_linear(2.)):
            self.assertAlmostEqual(float(p.phi(1.)), 1., places=12)
            self.assertTrue(pf.verify_scaling_bounds(p).passed, p.name)

    def test_tabulated(self):
        p = pf.tabulated([0.1, 1., 10.], [0.05, 1., 30.])
        self.assertAlmostEqual(float(p.phi(10.)), 30., places=10)
        self.assertAlmostEqual(float(p.phi(0.1)), 0.05, places=12)
        self.assertLess(float(p.phi(0.5)), 1.)

    def test_array_inputs(self):
        p = pf.tabulated(np.array([0.1, 1., 10.]), np.array([0.05, 1., 30.]))
        self.assertEqual(p.params['r'], [0.1, 1., 10.])
        q = pf.power_mixture(np.array([0.5, 1.5]), np.array([1., 3.]))
        self.assertEqual(q.params['weights'], [0.25, 0.75])
        self.assertAlmostEqual(pf.compute_A_phi(self.cauchy, 0, lambda_grid=np.logspace(-6, 0, 25)), 2., places=6)
        c = pf.comparability_constant(self.cauchy, t_grid=np.array([0.1, 1.]), r_grid=np.array([0., 1., 5.]))
        self.assertGreaterEqual(c, 1.)

    def test_immutable(self):
        p = pf.power_law(1.5)
        with self.assertRaises(FrozenInstanceError):
            p.case_tag = pf.CASE1
        with self.assertRaises(AttributeError):
            p.compensator_mode = pf.COMPENSATOR_NONE
        self.assertEqual(p.compensator_mode, pf.COMPENSATOR_FULL)


if __name__ == '__main__':
    unittest.main()
