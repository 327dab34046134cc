# Solving relative path problem
import sys
from os import path
sys.path.append(path.join(path.dirname(__file__), '..'))

# Import Unittest
import unittest

# Import standard library
import os
import tempfile

# Import third party packages
import numpy as np
from scipy.special import gamma

# Import my package
from levyheat import frozen as fz
from levyheat.exceptions import ConfigurationError, DomainError, ModelError, ResolutionError
from levyheat.profiles import piecewise_power, power_law


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


def cauchy_density(s, x):
    """Density at time s of the process with exponent -pi s |xi|."""
    return s / (np.pi ** 2 * s ** 2 + np.asarray(x) ** 2)


class TestFrozenKernels(unittest.TestCase):
    """
    Tests the kernels and exponents in kernels.py and exponent.py.
    """

    @classmethod
    def setUpClass(cls):
        cls.cauchy = fz.constant_kernel(power_law(1.))

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_bounds(self):
        self.assertEqual(fz.check_bounds(self.cauchy), 1.)
        with self.assertRaises(ModelError):
            fz.FrozenKernelSpec(lambda t, z: np.full(z.shape[0], 3.), power_law(1.), kappa0=2.)

    def test_odd_cancellation(self):
        # Truncated compensator with an odd part that does not cancel on balls
        with self.assertRaises(ModelError):
            fz.sign_asymmetric_kernel(power_law(1.), 0.5)
        spec = fz.sign_asymmetric_kernel(power_law(0.5), 0.5)
        self.assertFalse(spec.symmetric_in_z)
        self.assertTrue(spec.time_homogeneous)

    def test_time_homogeneity_detection(self):
        self.assertFalse(fz.time_modulated_kernel(power_law(1.), 0.3).time_homogeneous)
        self.assertTrue(fz.time_modulated_kernel(power_law(1.), 0.).time_homogeneous)

    def test_exponent_cauchy(self):
        xi = np.array([0.5, 1., 3.])
        psi = fz.characteristic_exponent(self.cauchy, 0., 1., xi)
        np.testing.assert_allclose(psi.real, -np.pi * xi, rtol=1e-6)
        np.testing.assert_allclose(psi.imag, 0., atol=1e-10)
        self.assertAlmostEqual(fz.characteristic_exponent(self.cauchy, 0.5, 0.75, 2.).real,
                               -0.25 * 2. * np.pi, places=5)
        with self.assertRaises(ValueError):
            fz.characteristic_exponent(self.cauchy, 1., 1., 1.)

    def test_large_jump_rates(self):
        self.assertAlmostEqual(fz.large_jump_rates(self.cauchy).sum(), 2., places=8)
        spec = fz.constant_kernel(piecewise_power(0.5, 3.))
        self.assertAlmostEqual(fz.large_jump_rates(spec).sum(), 2. / 3., places=8)

    def test_decomposition(self):
        small, large = fz.decompose_small_large(self.cauchy)
        self.assertAlmostEqual(large.rate, 2., places=8)
        total = small.exponent(1.3) + large.exponent(1.3)
        self.assertAlmostEqual(total.real, -1.3 * np.pi, delta=1e-4)

    def test_drift(self):
        # -(int_0^1 r^-1/2 dr) (1.5 - 0.5)
        spec = fz.sign_asymmetric_kernel(power_law(0.5), 0.5)
        np.testing.assert_allclose(fz.drift_vector(spec, 0., 1.), [-2.], rtol=1e-8)
        np.testing.assert_array_equal(fz.drift_vector(self.cauchy, 0., 1.), [0.])
        with self.assertRaises(DomainError):
            fz.drift_vector(spec, 1., 1.)

    def test_exponent_asymmetric_case3(self):
        # 1 + a sign(z) with phi = r^alpha, 1 < alpha < 2, full compensator
        alpha, a = 1.5, 0.5
        spec = fz.sign_asymmetric_kernel(power_law(alpha), a)
        xi = np.array([0.5, 1., 3.])
        psi = fz.characteristic_exponent(spec, 0., 1., xi)
        scale = xi ** alpha * gamma(-alpha)
        np.testing.assert_allclose(psi.real, 2. * scale * np.cos(np.pi * alpha / 2.), rtol=1e-6)
        np.testing.assert_allclose(np.abs(psi.imag), 2. * a * scale * np.sin(np.pi * alpha / 2.), rtol=1e-6)
        np.testing.assert_allclose(fz.characteristic_exponent(spec, 0., 1., -xi), np.conj(psi), rtol=1e-10)

    def test_kernel_config(self):
        spec = fz.kernel_from_config({'name': 'smooth_angular', 'params': {'a': 0.2}}, power_law(1.2))
        self.assertEqual(spec.to_config(), {'name': 'smooth_angular', 'params': {'a': 0.2}})
        with self.assertRaises(ConfigurationError):
            fz.kernel_from_config({'name': 'unknown'}, power_law(1.2))
        with self.assertRaises(ConfigurationError):
            fz.kernel_from_config({'name': 'constant', 'params': {'c': -1.}}, power_law(1.2))


class TestFrozenDensities(unittest.TestCase):
    """
    Tests the densities and operators in densities.py and operators.py.
    """

    @classmethod
    def setUpClass(cls):
        cls.profile = power_law(1.)
        cls.cauchy = fz.constant_kernel(cls.profile)
        cls.dens = fz.density_fft(cls.cauchy, 0., 1.)

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_cauchy_values(self):
        values = self.dens.at(np.array([0., np.pi]))
        self.assertAlmostEqual(values[0], 1. / np.pi ** 2, delta=1e-4)
        self.assertAlmostEqual(values[1], 1. / (2. * np.pi ** 2), delta=1e-4)
        self.assertFalse(self.dens.ringing)

    def test_mass(self):
        self.assertAlmostEqual(self.dens.mass, 1., delta=1e-4)
        self.assertGreater(self.dens.tail_mass, 0.)
        cdf = self.dens.cdf()
        self.assertTrue(np.all(np.diff(cdf) >= 0))
        self.assertAlmostEqual(cdf[self.dens.grid.n // 2], 0.5, delta=1e-3)

    def test_symmetry(self):
        inner = self.dens.values[1:]
        np.testing.assert_allclose(inner, inner[::-1], atol=1e-12)

    def test_density_scaled(self):
        self.assertAlmostEqual(fz.density_scaled(self.cauchy, 0., 0.5, 0.), cauchy_density(0.5, 0.), delta=1e-5)
        x = np.array([0.3, 2.])
        np.testing.assert_allclose(fz.density_scaled(self.cauchy, 1., 1.5, x), cauchy_density(0.5, x), atol=1e-5)
        with self.assertRaises(DomainError):
            fz.density_scaled(self.cauchy, 1., 1., 0.)

    def test_gradient(self):
        grad = fz.gradient(self.cauchy, 0., 1.)[0]
        x = np.array([1.])
        expected = -2. * x / (np.pi ** 2 + x ** 2) ** 2
        np.testing.assert_allclose(grad.at(x), expected, atol=1e-4)

    def test_mass_by_case(self):
        fixtures = [fz.constant_kernel(piecewise_power(0.5, 3.)),
                    fz.constant_kernel(power_law(1.5)),
                    fz.sign_asymmetric_kernel(power_law(1.5), 0.5)]
        for spec in fixtures:
            with self.subTest(kernel=spec.name, case=spec.profile.case_tag):
                dens = fz.density_fft(spec, 0., 1.)
                self.assertAlmostEqual(dens.mass, 1., delta=1e-3)
                self.assertFalse(dens.ringing)
        values = dens.at(np.array([-1., 1.]))
        self.assertGreater(abs(values[0] - values[1]), 1e-3)

    def test_density_scaled_matches_fft(self):
        # Grids scaled by a = phi^{-1}(s - t) sample the same transform
        for alpha in (1., 1.5):
            with self.subTest(alpha=alpha):
                spec = fz.constant_kernel(power_law(alpha))
                h = fz.density_fft(spec, 0., 1.).step
                a = spec.profile.inverse(0.5)
                dens = fz.density_fft(spec, 0., 0.5, fz.GridConfig(step=h * a, decay=1.))
                keep = np.abs(dens.x) <= 5. * a
                scaled = fz.density_scaled(spec, 0., 0.5, dens.x[keep], fz.GridConfig(step=h, decay=1.))
                np.testing.assert_allclose(scaled, dens.values[keep], rtol=1e-8)

    def test_gradient_order(self):
        # Centered differences against the spectral gradient, step halved once
        errors = []
        for k in (1, 2):
            grid = fz.GridConfig(n=4096 * k, step=0.125 / k, decay=1.)
            p = fz.density_fft(self.cauchy, 0., 1., grid)
            dp = fz.gradient(self.cauchy, 0., 1., grid)[0]
            idx = np.arange(k, 4096 * k - k, k)
            fd = (p.values[idx + 1] - p.values[idx - 1]) / (2. * p.step)
            keep = np.abs(p.x[idx]) <= 4.
            errors.append(np.max(np.abs(dp.values[idx][keep] - fd[keep])))
        self.assertGreaterEqual(np.log2(errors[0] / errors[1]), 1.9)

    def test_tail_density(self):
        x = np.array([50., 100.])
        np.testing.assert_allclose(fz.tail_density(self.cauchy, 0., 1., x), 1. / x ** 2, rtol=1e-12)

    def test_generator_matches_time_derivative(self):
        # d/ds p(0) = -1/(pi^2 s^2) at s = 1
        fine = fz.density_fft(self.cauchy, 0., 1., fz.GridConfig(n=4096, step=1. / 32., decay=1.))
        first, absolute = fz.delta_phi_apply(fine, self.cauchy, 0., fz.FIRST_ORDER)
        second, _ = fz.delta_phi_apply(fine, self.cauchy, 0., fz.SECOND_DIFFERENCE)
        self.assertAlmostEqual(first, -1. / np.pi ** 2, delta=1e-4)
        self.assertAlmostEqual(second, first, delta=1e-5)
        self.assertGreaterEqual(absolute, abs(first))
        with self.assertRaises(ResolutionError):
            fz.delta_phi_apply(self.dens, self.cauchy, 0.)

    def test_drifted_density(self):
        # Case1 with an asymmetric kernel: the drifted density is the shift by -2
        spec = fz.sign_asymmetric_kernel(power_law(0.5), 0.5)
        grid = fz.GridConfig(n=4096)
        base = fz.density_fft(spec, 0., 1., grid)
        drifted = fz.drifted_density(spec, 0., 1., grid)
        x = np.array([-0.5, 0., 0.5])
        np.testing.assert_allclose(drifted.at(x), base.at(x + 2.), atol=1e-4)

    def test_ratio_bracket(self):
        # p (1 + r^2) = (1 + r^2)/(pi^2 + r^2)
        lo, hi = fz.ratio_bracket(self.dens, self.profile)
        self.assertAlmostEqual(lo, 1. / np.pi ** 2, delta=1e-4)
        self.assertLess(hi, 1.)
        self.assertGreater(hi, 0.9)

    def test_perturbation_sweep(self):
        report = fz.perturbation_sweep(self.cauchy, 0., 1.)
        self.assertEqual(len(report.ratios), 2)
        self.assertTrue(report.passed)
        with self.assertRaises(ConfigurationError):
            fz.perturbation_sweep(self.cauchy, 0., 1., eps=(0.01, 0.02))
        report = fz.perturbation_sweep(self.cauchy, 0., 1., eps=np.array([0.04, 0.02]))
        np.testing.assert_array_equal(report.eps, [0.04, 0.02])

    def test_csv(self):
        with tempfile.TemporaryDirectory() as folder:
            name = os.path.join(folder, "density.csv")
            self.dens.to_csv(name)
            other = fz.GridDensity.from_csv(name)
        self.assertEqual(other.grid.n, self.dens.grid.n)
        np.testing.assert_array_equal(other.values, self.dens.values)
        self.assertEqual(other.tail_mass, self.dens.tail_mass)


if __name__ == '__main__':
    unittest.main()
