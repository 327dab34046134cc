# Solving relative path problem
import sys
from os import path
sys.path.append(path.join(path.dirname(__file__), '..'))

# Import Unittest
import unittest

# Import third party packages
import numpy as np

# Import my package
from levyheat import parametrix as pm
from levyheat.exceptions import ConfigurationError, DomainError, HypothesisGateError, ModelError
from levyheat.profiles import piecewise_power, power_law


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


def cauchy_kernel(length, x, y):
    return length / (np.pi ** 2 * length ** 2 + (y - x) ** 2)


class TestVariableKernels(unittest.TestCase):
    """
    Tests the position-dependent kernels in kernels.py.
    """

    @classmethod
    def setUpClass(cls):
        cls.profile = power_law(1.)

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_config_checks(self):
        with self.assertRaises(ConfigurationError):
            pm.ParametrixConfig(n_x=100)
        with self.assertRaises(ConfigurationError):
            pm.ParametrixConfig(n_time=1)
        self.assertAlmostEqual(pm.ParametrixConfig(n_x=128, half_width=8.).step, 0.125, places=14)

    def test_graded_nodes(self):
        nodes = pm.graded_nodes(0., 1., 4, 0.5)
        self.assertEqual(nodes[0], 0.)
        self.assertEqual(nodes[-1], 1.)
        self.assertAlmostEqual(nodes[2], 0.5, places=14)
        self.assertLess(nodes[1], 0.25)
        np.testing.assert_allclose(pm.graded_nodes(0., 1., 4, 1.5), np.linspace(0., 1., 5), atol=1e-14)

    def test_detected_properties(self):
        spec = pm.sine_modulated_kernel(self.profile)
        self.assertFalse(spec.x_independent)
        self.assertTrue(spec.time_homogeneous)
        self.assertEqual(spec.hypothesis, pm.HYPOTHESIS_SYMMETRIC)
        self.assertTrue(pm.x_constant_kernel(self.profile).x_independent)

    def test_frozen_at(self):
        spec = pm.sine_modulated_kernel(self.profile, a=0.4)
        frozen = spec.frozen_at(np.pi / 2.)
        np.testing.assert_allclose(frozen(0., np.array([[0.5], [-3.]])), [1.4, 1.4])

    def test_oscillation(self):
        # Gap a/2 |sin x - sin y| against ell^2 = min(|x - y|, 1)
        self.assertEqual(pm.sine_modulated_kernel(self.profile, a=1.).to_config()['params']['a'], 1.)
        with self.assertRaises(ModelError):
            pm.sine_modulated_kernel(self.profile, a=2.)

    def test_gate(self):
        # A^(1) diverges for phi = r near 0
        profile = piecewise_power(1., 2.)
        with self.assertRaises(HypothesisGateError) as ctx:
            pm.sine_modulated_kernel(profile, skew=0.3)
        self.assertEqual(ctx.exception.hypothesis, pm.HYPOTHESIS_GENERAL)
        spec = pm.sine_modulated_kernel(profile, skew=0.3, gate=False)
        self.assertIsNone(spec.hypothesis)

    def test_kernel_config(self):
        spec = pm.variable_kernel_from_config({'name': 'sine_modulated', 'params': {'a': 0.2},
                                               'modulus': {'family': 'power', 'params': {'eta': 0.75}}},
                                              self.profile)
        self.assertEqual(spec.modulus.alpha, 0.75)
        self.assertEqual(spec.to_config()['params']['a'], 0.2)
        with self.assertRaises(ConfigurationError):
            pm.variable_kernel_from_config({'name': 'unknown'}, self.profile)
        with self.assertRaises(ConfigurationError):
            pm.variable_kernel_from_config({'name': 'sine_modulated', 'params': {'a': 3.}}, self.profile)


class TestLeviConstruction(unittest.TestCase):
    """
    Tests the heat kernels built in levi.py, estimates.py and extension.py.
    """

    @classmethod
    def setUpClass(cls):
        cls.profile = power_law(1.)
        cls.cfg = pm.ParametrixConfig(n_x=128, half_width=8.)
        cls.constant = pm.x_constant_kernel(cls.profile)
        cls.sine = pm.sine_modulated_kernel(cls.profile, a=0.4)
        cls.bank = pm.SymbolBank(cls.sine, cls.cfg)

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_x_constant_is_frozen(self):
        field = pm.heat_kernel(self.constant, 0., 0.5, eps0=0.5, cfg=self.cfg)
        inner = field.interior
        X, Y = np.meshgrid(field.x[inner], field.x[inner], indexing='ij')
        np.testing.assert_allclose(field.values[np.ix_(inner, inner)], cauchy_kernel(0.5, X, Y), atol=1e-4)
        self.assertLess(field.mass_error, self.cfg.mass_tol)

    def test_x_constant_defect_vanishes(self):
        q = pm.solve_q(self.constant, 0., 0.5, self.cfg)
        self.assertEqual(q.residual, 0.)
        self.assertEqual(pm.q0(self.constant, 0., 0.5, 0., 1.), 0.)
        self.assertEqual(pm.epsilon0(self.constant, self.cfg), 0.5)

    def test_picard_contraction(self):
        q = pm.solve_q(self.sine, 0., 0.25, self.cfg, bank=self.bank)
        self.assertLess(q.contraction, 1.)
        with self.assertRaises(ConfigurationError):
            pm.picard_step(q.values[:-1], q.defect)
        self.assertLessEqual(q.residual, 3. * q.tol)
        field = pm.assemble_p(self.sine, q)
        self.assertLess(field.mass_error, self.cfg.mass_tol)

    def test_two_sided(self):
        field = pm.heat_kernel(self.sine, 0., 0.25, eps0=0.25, cfg=self.cfg, bank=self.bank)
        lo, hi = pm.two_sided_ratio(field, self.profile)
        self.assertGreater(lo, 0.)
        self.assertLess(hi, 2.)

    def test_extension_ledger(self):
        field = pm.heat_kernel(self.sine, 0., 0.5, eps0=0.25, cfg=self.cfg, bank=self.bank)
        self.assertEqual(len(field.ledger), 3)
        self.assertEqual(field.ledger[-1]['method'], pm.CHAPMAN_KOLMOGOROV)
        self.assertLess(field.mass_error, self.cfg.mass_tol)
        with self.assertRaises(DomainError):
            pm.heat_kernel(self.sine, 0.5, 0.5, eps0=0.25, cfg=self.cfg, bank=self.bank)

    def test_chapman_kolmogorov(self):
        report = pm.ck_residual(self.sine, 0., 0.5, 0.25, cfg=self.cfg, bank=self.bank)
        self.assertTrue(report.passed, report.residual)
        with self.assertRaises(DomainError):
            pm.ck_residual(self.sine, 0., 0.5, 0.25, r=0.5, cfg=self.cfg, bank=self.bank)

    def test_bump(self):
        self.assertAlmostEqual(float(pm.bump(0.)), np.exp(-1.), places=14)
        np.testing.assert_array_equal(pm.bump(np.array([-2., 2., 3.])), [0., 0., 0.])


if __name__ == '__main__':
    unittest.main()
