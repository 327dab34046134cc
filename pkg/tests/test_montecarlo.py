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

# Import my package
from levyheat import montecarlo as mc
from levyheat.exceptions import ConfigurationError, DomainError, StatisticsError
from levyheat.frozen import characteristic_exponent, constant_kernel, density_fft
from levyheat.parametrix import x_constant_kernel
from levyheat.profiles import piecewise_power, power_law
from levyheat.statistics import Cauchy, GridDistribution, cf_check, ks_distance


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


class TestMonteCarlo(unittest.TestCase):
    """
    Tests the functions in montecarlo.py and passage.py.
    """

    @classmethod
    def setUpClass(cls):
        cls.profile = power_law(1.)
        cls.cauchy = constant_kernel(cls.profile)
        cls.cfg = mc.SimConfig(paths=20000, seed=7, block_size=4096)

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        pass

    def tearDown(self):
        pass

    def test_config(self):
        with self.assertRaises(ValueError):
            mc.SimConfig(small_jump_cutoff=0.)
        with self.assertRaises(ValueError):
            mc.SimConfig(paths=0)
        with self.assertRaises(ValueError):
            mc.SimConfig(seed=-1)
        blocks = [(lo, hi) for lo, hi, _ in mc.SimConfig(paths=10, block_size=4).blocks()]
        self.assertEqual(blocks, [(0, 4), (4, 8), (8, 10)])

    def test_reproducible(self):
        cfg = mc.SimConfig(paths=500, seed=11, block_size=128)
        a = mc.simulate_frozen(self.cauchy, 0., 1., cfg)
        b = mc.simulate_frozen(self.cauchy, 0., 1., cfg)
        np.testing.assert_array_equal(a.values, b.values)
        self.assertEqual(a.values.shape, (500, 1))

    def test_frozen_cauchy(self):
        samples = mc.simulate_frozen(self.cauchy, 0., 1., self.cfg, x0=1.)
        result = ks_distance(samples.values[:, 0], Cauchy(1., np.pi).cdf, alpha=0.001)
        self.assertTrue(result.passed, result.distance)
        np.testing.assert_allclose(samples.increments, samples.values - 1.)
        with self.assertRaises(DomainError):
            mc.simulate_frozen(self.cauchy, 1., 1., self.cfg)

    def test_frozen_against_density(self):
        # One fixture per case, compared with the FFT distribution and with exp Psi
        xi = np.linspace(0.25, 2., 8)
        for profile in (piecewise_power(0.5, 3.), self.profile, power_law(1.5)):
            spec = constant_kernel(profile)
            with self.subTest(case=profile.case_tag):
                samples = mc.simulate_frozen(spec, 0., 1., self.cfg)
                dist = GridDistribution(density_fft(spec, 0., 1.))
                ks = ks_distance(samples.values[:, 0], dist.cdf, alpha=0.05)
                self.assertLessEqual(ks.distance, ks.critical)
                cf = cf_check(samples.values, xi, characteristic_exponent(spec, 0., 1., xi))
                self.assertLessEqual(cf.worst, cf.bound)

    def test_csv(self):
        samples = mc.simulate_frozen(self.cauchy, 0., 1., mc.SimConfig(paths=256, seed=2), x0=0.5)
        with tempfile.TemporaryDirectory() as folder:
            name = os.path.join(folder, "samples.csv")
            samples.to_csv(name)
            other = mc.SampleSet.from_csv(name)
        np.testing.assert_array_equal(other.values, samples.values)
        np.testing.assert_array_equal(other.x0, [0.5])
        self.assertEqual((other.t, other.s, other.kernel_id), (0., 1., samples.kernel_id))

    def test_radial_sampler(self):
        sampler = mc.RadialSampler(self.profile, 1.)
        r = sampler.sample(np.array([0.5, 0.25]))
        # P(R > r) = 1/r for the tail of 1/r^2 on (1, inf)
        np.testing.assert_allclose(r, [2., 4.], rtol=1e-4)
        with self.assertRaises(DomainError):
            mc.RadialSampler(self.profile, 2., 1.)

    def test_variable_x_constant(self):
        spec = x_constant_kernel(self.profile)
        samples = mc.simulate_variable_euler(spec, 0., 1., self.cfg)
        frozen = mc.simulate_frozen(spec.frozen_at(0.), 0., 1., self.cfg)
        np.testing.assert_array_equal(samples.values, frozen.values)
        with self.assertRaises(ConfigurationError):
            mc.simulate_variable_euler(spec, 0., 0.1, self.cfg)

    def test_budget(self):
        self.assertEqual(mc.required_paths(0.01), 2500)
        with self.assertRaises(StatisticsError) as ctx:
            mc.check_budget(mc.SimConfig(paths=100), 0.01)
        self.assertEqual(ctx.exception.required, 2500)
        with self.assertRaises(StatisticsError):
            mc.exit_time_stats(self.cauchy, 0., 0.25, cfg=mc.SimConfig(paths=100))

    def test_exit_time(self):
        report = mc.exit_time_stats(self.cauchy, 0., 0.25, cfg=mc.SimConfig(paths=4000, seed=3), precision=0.01)
        self.assertEqual(report.r.size, 16)
        self.assertTrue(np.all(np.diff(report.probability) >= 0))
        self.assertTrue(np.all(report.ci_low <= report.probability))
        self.assertTrue(report.passed)

    def test_hitting(self):
        report = mc.hitting_prob_stats(self.cauchy, 0., 1., 0.25, cfg=mc.SimConfig(paths=4000, seed=5))
        self.assertGreater(report.probability, 0.)
        self.assertTrue(report.passed)
        with self.assertRaises(DomainError):
            mc.hitting_prob_stats(self.cauchy, 0., 0.3, 0.25, cfg=mc.SimConfig(paths=4000))


if __name__ == '__main__':
    unittest.main()
