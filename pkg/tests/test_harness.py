# Solving relative path problem
import sys
from os import path
sys.path.append(path.join(path.dirname(__file__), '..'))

# Import Unittest
import unittest

# Import standard library
import json
import os
import tempfile

# Import third party packages
import numpy as np
import pandas as pd

# Import my package
from levyheat import harness as hn
from levyheat.exceptions import (ConfigurationError, ConvergenceError, DivergenceError, HypothesisGateError,
                                 ModelError, StatisticsError)
from levyheat.frozen import FrozenKernelSpec, GridDensity
from levyheat.parametrix import VariableKernelSpec


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


CAUCHY = {
    'profile': {'family': 'power_law', 'params': {'alpha': 1.}},
    'kernel': {'name': 'constant', 'params': {'c': 1.}},
}


class TestExperimentConfig(unittest.TestCase):
    """
    Tests the class ExperimentConfig.
    """

    @classmethod
    def setUpClass(cls):
        pass

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        self.config = hn.ExperimentConfig.from_dict(dict(CAUCHY))

    def tearDown(self):
        pass

    def test_defaults(self):
        self.assertEqual(self.config.kind, hn.FROZEN)
        self.assertEqual(self.config.window, (0., 1.))
        self.assertEqual(self.config.tolerances['mass'], 1e-3)
        self.assertFalse(self.config.validation['duhamel'])
        self.assertEqual(self.config.ledger_path, os.path.join("out", "ledger.json"))
        self.assertEqual(self.config.grid_config().mass_tol, 1e-3)
        self.assertEqual(self.config.sim_config().seed, 20201014)

    def test_invalid(self):
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_dict({})
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_dict(dict(CAUCHY, colour='red'))
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_dict({'profile': CAUCHY['profile']})
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_dict(dict(CAUCHY, windows=[[1., 0.5]]))
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_dict(dict(CAUCHY, tolerances={'speed': 1.}))
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_dict(dict(CAUCHY, tolerances={'mass': -1.}))
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_dict(dict(CAUCHY, simulation={'paths': 0})).sim_config()
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_dict(dict(CAUCHY, grid={'size': 8})).grid_config()

    def test_overrides(self):
        other = self.config.with_overrides(out="elsewhere", seed=5, tol_mass=1e-4, tol_ck=1e-2,
                                           grid_n=512, paths=1000)
        self.assertEqual(other.output, "elsewhere")
        self.assertEqual(other.sim_config().seed, 5)
        self.assertEqual(other.sim_config().paths, 1000)
        self.assertEqual(other.grid_config().n, 512)
        self.assertEqual(other.parametrix_config().n_x, 512)
        self.assertEqual(other.parametrix_config().ck_tol, 1e-2)
        self.assertEqual(other.grid_config().mass_tol, 1e-4)
        self.assertEqual(self.config.output, "out")
        self.assertEqual(self.config.with_overrides().to_dict(), self.config.to_dict())

    def test_config_id(self):
        moved = self.config.with_overrides(out="elsewhere")
        self.assertEqual(hn.config_id(moved), hn.config_id(self.config))
        self.assertNotEqual(hn.config_id(self.config.with_overrides(seed=1)), hn.config_id(self.config))

    def test_builders(self):
        self.assertIsInstance(self.config.build_kernel(), FrozenKernelSpec)
        variable = hn.ExperimentConfig.from_dict({
            'profile': CAUCHY['profile'],
            'kernel': {'kind': hn.VARIABLE, 'name': 'sine_modulated', 'params': {'a': 0.4}}})
        self.assertIsInstance(variable.build_kernel(), VariableKernelSpec)
        self.assertEqual(variable.build_kernel().modulus.alpha, 0.5)

    def test_passage_settings(self):
        settings = self.config.passage_settings()
        self.assertEqual(settings['y0'], 1.)
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_dict(dict(CAUCHY, passage={'radius': 0.})).passage_settings()

    def test_json(self):
        with tempfile.TemporaryDirectory() as folder:
            name = os.path.join(folder, "config.json")
            self.config.to_json(name)
            other = hn.ExperimentConfig.from_json(name)
            with open(name, 'w') as fh:
                fh.write("[1, 2]")
            with self.assertRaises(ConfigurationError):
                hn.ExperimentConfig.from_json(name)
        self.assertEqual(other.to_dict(), self.config.to_dict())
        with self.assertRaises(ConfigurationError):
            hn.ExperimentConfig.from_json(os.path.join(folder, "missing.json"))


class TestReports(unittest.TestCase):
    """
    Tests the reports and the regression ledger in reports.py.
    """

    @classmethod
    def setUpClass(cls):
        pass

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        self.folder = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.folder.cleanup()

    def test_check(self):
        self.assertTrue(hn.check("a", 0.5, 0., 1.).passed)
        self.assertFalse(hn.check("a", 2., upper=1.).passed)
        self.assertFalse(hn.check("a", float('nan'), lower=0.).passed)
        self.assertIsNone(hn.check("a", "Case2").passed)

    def test_report(self):
        report = hn.ValidationReport('density', 'abc')
        report.add(hn.check("mass", 1e-5, upper=1e-3))
        report.run("pair", lambda: [hn.check("lower", 0.3), hn.check("upper", 2., upper=1.)])
        self.assertEqual(report.names(), ["mass", "pair.lower", "pair.upper"])
        self.assertFalse(report.passed)
        self.assertEqual(report.failures, ["pair.upper"])
        self.assertEqual(report.exit_code, 1)
        self.assertNotIn('runtime', report.to_dict()['checks'][0])
        with self.assertRaises(ValueError):
            report.add(hn.check("mass", 0.))

    def test_ledger(self):
        name = os.path.join(self.folder.name, "ledger.json")
        ledger = hn.RegressionLedger(name)
        first = ledger.bracket("cauchy", 0.1, 0.9)
        self.assertEqual(first.value, 0.)
        self.assertTrue(first.passed)
        ledger.save()
        ledger = hn.RegressionLedger(name)
        self.assertIn("cauchy", ledger)
        self.assertTrue(ledger.bracket("cauchy", 0.1, 0.92).passed)
        wider = ledger.bracket("cauchy", 0.05, 0.9)
        self.assertAlmostEqual(wider.value, 0.5, places=12)
        self.assertFalse(wider.passed)
        ledger.save()
        with open(name) as fh:
            self.assertEqual(json.load(fh)['brackets']['cauchy'], {'lower': 0.1, 'upper': 0.9})

    def test_ledger_version(self):
        name = os.path.join(self.folder.name, "ledger.json")
        with open(name, 'w') as fh:
            json.dump({'version': 0, 'brackets': {}}, fh)
        with self.assertRaises(ConfigurationError):
            hn.RegressionLedger(name)


class TestCommandLine(unittest.TestCase):
    """
    Tests the command line interface in cli.py.
    """

    @classmethod
    def setUpClass(cls):
        pass

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        self.folder = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.folder.cleanup()

    def _write(self, content):
        name = os.path.join(self.folder.name, "config.json")
        with open(name, 'w') as fh:
            fh.write(content)
        return name

    def test_exit_codes(self):
        self.assertEqual(hn.exit_code(HypothesisGateError("x", hypothesis='H2')), hn.EXIT_GATE)
        self.assertEqual(hn.exit_code(StatisticsError("x", required=10)), hn.EXIT_STATISTICS)
        self.assertEqual(hn.exit_code(ConvergenceError("x")), hn.EXIT_NUMERIC)
        self.assertEqual(hn.exit_code(DivergenceError("x")), hn.EXIT_NUMERIC)
        self.assertEqual(hn.exit_code(ModelError("x")), hn.EXIT_CONFIG)
        self.assertEqual(hn.exit_code(ConfigurationError("x")), hn.EXIT_CONFIG)

    def test_parse_args(self):
        args = hn.parse_args(["density", "--config", "c.json", "--grid-n", "1024", "--tol-mass", "1e-4"])
        self.assertEqual(args.command, "density")
        self.assertEqual(args.grid_n, 1024)
        self.assertEqual(args.tol_mass, 1e-4)
        with self.assertRaises(SystemExit):
            hn.parse_args(["profile", "--config", "c.json", "-v", "-q"])
        with self.assertRaises(SystemExit):
            hn.parse_args(["plot", "--config", "c.json"])

    def test_empty_config(self):
        self.assertEqual(hn.main(["profile", "--config", self._write(""), "-q"]), hn.EXIT_CONFIG)
        self.assertEqual(hn.main(["profile", "--config", self._write("{}"), "-q"]), hn.EXIT_CONFIG)
        missing = os.path.join(self.folder.name, "missing.json")
        self.assertEqual(hn.main(["profile", "--config", missing, "-q"]), hn.EXIT_CONFIG)

    def test_statistics_budget(self):
        name = self._write(json.dumps(CAUCHY))
        out = os.path.join(self.folder.name, "out")
        code = hn.main(["simulate", "--config", name, "--out", out, "--paths", "10", "-q"])
        self.assertEqual(code, hn.EXIT_STATISTICS)

    def test_profile_command(self):
        name = self._write(json.dumps(CAUCHY))
        out = os.path.join(self.folder.name, "out")
        self.assertEqual(hn.main(["profile", "--config", name, "--out", out, "-q"]), hn.EXIT_PASS)
        for produced in ("profile_report.json", "profile_report.csv", "m_phi_ell.csv", "manifest.json"):
            self.assertTrue(os.path.isfile(os.path.join(out, produced)), produced)
        with open(os.path.join(out, "profile_report.json")) as fh:
            first = fh.read()
        hn.main(["profile", "--config", name, "--out", out, "-q"])
        with open(os.path.join(out, "profile_report.json")) as fh:
            self.assertEqual(fh.read(), first)
        self.assertIn('"M_phi_ell.max"', first)


class TestCommands(unittest.TestCase):
    """
    Runs the commands of validation.py on the shipped configurations.
    """

    @classmethod
    def setUpClass(cls):
        folder = path.join(path.dirname(__file__), '..', 'configs')
        cls.frozen = path.join(folder, "cauchy_frozen.json")
        cls.variable = path.join(folder, "sine_variable.json")

    @classmethod
    def tearDownClass(cls):
        pass

    def setUp(self):
        self.folder = tempfile.TemporaryDirectory()
        self.out = os.path.join(self.folder.name, "out")

    def tearDown(self):
        self.folder.cleanup()

    def _run(self, command, config, *extra):
        return hn.main([command, "--config", config, "--out", self.out, "-q"] + list(extra))

    def _checks(self, command):
        with open(os.path.join(self.out, "{}_report.json".format(command))) as fh:
            return {c['name']: c for c in json.load(fh)['checks']}

    def _read(self, name):
        with open(os.path.join(self.out, name), 'rb') as fh:
            return fh.read()

    def test_density_frozen(self):
        self.assertEqual(self._run("density", self.frozen), hn.EXIT_PASS)
        checks = self._checks("density")
        self.assertTrue(checks['mass.0']['passed'])
        self.assertTrue(checks['mass.1']['passed'])
        dens = GridDensity.from_csv(os.path.join(self.out, "density_0.csv"))
        keep = np.abs(dens.x) <= 10.
        exact = 1. / (np.pi ** 2 + dens.x[keep] ** 2)
        self.assertLessEqual(np.max(np.abs(dens.values[keep] / exact - 1.)), 1e-3)

    def test_density_x_constant(self):
        # A kernel without x dependence gives the frozen density in every row
        frozen = self._write(dict(CAUCHY, windows=[[0., 0.5]], grid={'n': 4096, 'step': 0.03125}))
        variable = self._write({'profile': CAUCHY['profile'],
                                'kernel': {'kind': hn.VARIABLE, 'name': 'x_constant', 'params': {'c': 1.}},
                                'windows': [[0., 0.5]], 'slices': [0.],
                                'parametrix': {'n_x': 128, 'half_width': 8.}}, "variable.json")
        self.assertEqual(self._run("density", frozen), hn.EXIT_PASS)
        self.assertEqual(self._run("density", variable), hn.EXIT_PASS)
        dens = GridDensity.from_csv(os.path.join(self.out, "density_0.csv"))
        row = pd.read_csv(os.path.join(self.out, "heat_kernel_0_0.csv"), comment='#', float_precision='round_trip')
        inner = row[np.abs(row['y']) <= 4.]
        np.testing.assert_allclose(inner['p'].to_numpy(), dens.at(inner['y'].to_numpy()), atol=5e-4)
        with open(os.path.join(self.out, "intervals_0.json")) as fh:
            self.assertGreaterEqual(len(json.load(fh)['intervals']), 1)

    def test_validate_frozen(self):
        self.assertEqual(self._run("validate", self.frozen), hn.EXIT_PASS)
        checks = self._checks("validate")
        self.assertGreaterEqual(checks['gradient.fd_order']['value'], 1.9)
        self.assertLessEqual(checks['scaling.relative_error']['value'], 1e-8)
        self.assertLess(checks['two_sided.grid_doubling']['value'], 0.05)

    def test_validate_variable(self):
        self.assertEqual(self._run("validate", self.variable), hn.EXIT_PASS)
        checks = self._checks("validate")
        self.assertLessEqual(checks['ck']['value'], 1e-3)
        self.assertLess(checks['contraction.ratio']['value'], 1.)
        self.assertTrue(checks['duhamel.forward']['passed'])
        self.assertTrue(checks['duhamel.backward']['passed'])
        self.assertTrue(os.path.isfile(os.path.join(self.out, "ledger.json")))

    def test_simulate_reproducible(self):
        self.assertEqual(self._run("simulate", self.frozen), hn.EXIT_PASS)
        checks = self._checks("simulate")
        self.assertTrue(checks['ks']['passed'])
        self.assertTrue(checks['cf']['passed'])
        self.assertTrue(checks['passage.exit']['passed'])
        report, samples = self._read("simulate_report.json"), self._read("samples.csv")
        self.assertEqual(self._run("simulate", self.frozen), hn.EXIT_PASS)
        self.assertEqual(self._read("simulate_report.json"), report)
        self.assertEqual(self._read("samples.csv"), samples)
        self.assertIn(self._run("simulate", self.frozen, "--seed", "3"), (hn.EXIT_PASS, hn.EXIT_CHECK))
        self.assertNotEqual(self._read("samples.csv"), samples)

    def test_simulate_variable(self):
        self.assertEqual(self._run("simulate", self.variable), hn.EXIT_PASS)
        checks = self._checks("simulate")
        self.assertLessEqual(checks['ks']['value'], checks['ks']['upper'])

    def _write(self, content, name="config.json"):
        name = os.path.join(self.folder.name, name)
        with open(name, 'w') as fh:
            json.dump(content, fh)
        return name


if __name__ == '__main__':
    unittest.main()
