# Created on 2020/10/20

# This module is for the commands of the harness: they build the objects of an
# ExperimentConfig, run the checks and write reports, CSV files and manifests.

# Standard library imports
from dataclasses import replace
import hashlib
import json
import logging
import os

# Third party imports
import numpy as np
import pandas as pd
from typeguard import typechecked

# Local application imports
from ..exceptions import DomainError
from ..frozen import (FIRST_ORDER, SECOND_DIFFERENCE, characteristic_exponent, delta_phi_apply,
                      density_fft, density_scaled, gradient, perturbation_sweep, ratio_bracket)
from ..moduli import (REGULARLY_VARYING, M_phi_ell, check_dini, verify_class_tag, verify_convolution)
from ..montecarlo import (check_budget, exit_time_stats, hitting_prob_stats, simulate_frozen,
                          simulate_variable_euler)
from ..parametrix import (SymbolBank, BACKWARD, FORWARD, ck_residual, duhamel_check, epsilon0,
                          heat_kernel, holder_sweep, near_diagonal_sweep, solve_q, two_sided_ratio)
from ..profiles import (c0_phi, classify_case, comparability_constant, compute_A_phi, rho,
                        verify_scaling_bounds)
from ..quadrature import DEFAULT_QUADRATURE, QuadratureConfig, is_divergent
from ..statistics import GridDistribution, cf_check, ks_distance
from .config import FROZEN, ExperimentConfig
from .reports import RegressionLedger, ValidationReport, check, write_manifest

logger = logging.getLogger(__name__)


#---------#---------#---------#---------#---------#---------#---------#---------#---------#


LADDER = (1., 0.5, 0.25)
M_TIMES = np.logspace(-4, 0, 9)


def config_id(config: ExperimentConfig) -> str:
    """Digest of the configuration, output locations excluded."""
    content = config.to_dict()
    content.pop('output')
    content.pop('ledger')
    return hashlib.sha1(json.dumps(content, sort_keys=True).encode()).hexdigest()[:12]


def _folder(config):
    os.makedirs(config.output, exist_ok=True)
    return config.output


def _finish(report, folder):
    report.to_json(os.path.join(folder, "{}_report.json".format(report.command)))
    report.to_csv(os.path.join(folder, "{}_report.csv".format(report.command)))
    logger.info("%s: %d checks, passed=%s", report.command, len(report), report.passed)
    return report


def _drift(values):
    """Spread (max - min)/max of positive constants."""
    values = np.asarray(values, dtype=float)
    return float((values.max() - values.min()) / values.max())


def _aligned(grid, n, step):
    """Grid settings with a fixed size and step, the decay check being skipped."""
    return replace(grid, n=int(n), step=float(step), decay=1.)


# PROFILE REPORT

def _finite_or_flag(name, value):
    return check(name, "divergent" if is_divergent(value) else value)


def _gate(profile, i, quad):
    open_ = not is_divergent(compute_A_phi(profile, i, quad=quad))
    return check("H{}".format(i + 1), "open" if open_ else "closed")


def _M_sweep(modulus, profile, folder, quad):
    values = []
    for t in M_TIMES:
        v = M_phi_ell(modulus, profile, float(t), quad)
        values.append(np.inf if is_divergent(v) else float(v))
    values = np.asarray(values)
    pd.DataFrame({'t': M_TIMES, 'M': values}).to_csv(os.path.join(folder, "m_phi_ell.csv"),
                                                      index=False, float_format='%.17g')
    finite = bool(np.all(np.isfinite(values)))
    return [check("max", float(np.max(values)) if finite else np.inf, passed=finite),
            check("spread", float(np.max(values) / np.min(values)) if finite else np.inf)]


def _convolution(modulus, profile, quad):
    if REGULARLY_VARYING not in modulus.class_tag or modulus.alpha is None or not 0 <= modulus.alpha < 1:
        return check("dk1_max", "not applicable")
    report = verify_convolution(modulus, modulus, profile, 1., 0.5, quad=quad)
    return check("dk1_max", report.dk1_max, passed=report.passed)


@typechecked
def cmd_profile_report(config: ExperimentConfig, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> ValidationReport:
    """
    Checks the scaling profile and the modulus of a configuration.

    Writes profile_report.json/.csv, m_phi_ell.csv and manifest.json in the output directory.
    The integrability constants and the hypothesis gates are reported without deciding
    the outcome.
    """
    folder = _folder(config)
    profile = config.build_profile()
    modulus = config.build_modulus()
    report = ValidationReport('profile', config_id(config))

    case = classify_case(profile, quad)
    report.add(check("case", case, passed=case == profile.case_tag))
    bounds = verify_scaling_bounds(profile)
    report.add(check("scaling_lower", bounds.lower_ratio, passed=bounds.passed))
    report.add(check("scaling_upper", bounds.upper_ratio, passed=bounds.passed))
    report.run("c0", lambda: _finite_or_flag("c0", c0_phi(profile, quad)))
    report.run("comparability", lambda: check("comparability", comparability_constant(profile)))
    for i in (0, 1):
        report.run("A{}".format(i), lambda i=i: _finite_or_flag("A", compute_A_phi(profile, i, quad=quad)))
        report.add(_gate(profile, i, quad))

    report.add(check("dini", "yes" if check_dini(modulus, quad) else "no"))
    for tag, ok in sorted(verify_class_tag(modulus, quad).items()):
        report.add(check("class_{}".format(tag), tag, passed=ok))
    report.run("M_phi_ell", _M_sweep, modulus, profile, folder, quad)
    report.run("convolution", _convolution, modulus, profile, quad)

    write_manifest(folder, {"m_phi_ell.csv": {'columns': ['t', 'M'],
                                              'description': "M^phi_ell(t) on a logarithmic grid of t."}})
    return _finish(report, folder)


# DENSITIES

@typechecked
def cmd_density(config: ExperimentConfig, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> ValidationReport:
    """
    Computes the densities of every window of the configuration.

    Frozen kernels give density_<i>.csv; variable kernels give one row file
    heat_kernel_<i>_<k>.csv per starting point and the interval ledger intervals_<i>.json.

    Raises
    ------
    HypothesisGateError
      When a variable kernel fails its integrability hypothesis.
    """
    folder = _folder(config)
    profile = config.build_profile()
    spec = config.build_kernel(profile)
    report = ValidationReport('density', config_id(config))
    manifest = {}
    tol = config.tolerances['mass']

    if config.kind == FROZEN:
        grid = config.grid_config()
        columns = ['x', 'p'] if spec.d == 1 else ['x1', 'x2', 'p']
        for i, (t, s) in enumerate(config.windows):
            dens = density_fft(spec, float(t), float(s), grid, quad)
            name = "density_{}.csv".format(i)
            dens.to_csv(os.path.join(folder, name))
            manifest[name] = {'columns': columns,
                              'description': "Frozen density on [{:g}, {:g}].".format(t, s)}
            report.add(check("mass.{}".format(i), abs(dens.mass - 1.), upper=tol))
            report.add(check("ringing.{}".format(i), dens.min_value, passed=not dens.ringing))
        return _finish_density(report, folder, manifest)

    pcfg = config.parametrix_config()
    bank = SymbolBank(spec, pcfg, quad)
    eps0 = epsilon0(spec, pcfg, bank, quad=quad)
    report.add(check("eps0", eps0))
    for i, (t, s) in enumerate(config.windows):
        field = heat_kernel(spec, float(t), float(s), eps0, pcfg, bank, quad)
        for k, x0 in enumerate(config.slices):
            name = "heat_kernel_{}_{}.csv".format(i, k)
            field.to_csv(os.path.join(folder, name), x0=float(x0))
            manifest[name] = {'columns': ['y', 'p'],
                              'description': "p(t, x0; s, y) on [{:g}, {:g}] at x0={:g}.".format(t, s, x0)}
        name = "intervals_{}.json".format(i)
        field.write_ledger(os.path.join(folder, name))
        manifest[name] = {'columns': ['t', 's', 'method'],
                          'description': "Intervals solved directly or composed by Chapman-Kolmogorov."}
        report.add(check("mass.{}".format(i), field.mass_error, upper=tol))
        report.add(check("intervals.{}".format(i), float(len(field.ledger))))
    return _finish_density(report, folder, manifest)


def _finish_density(report, folder, manifest):
    write_manifest(folder, manifest)
    return _finish(report, folder)


# FROZEN CHECKS

def _scaling_check(spec, t, s, dens, grid, tol, quad):
    a = spec.profile.inverse(s - t)
    pts = dens.grid.points().reshape(-1, spec.d)
    r = np.sqrt(np.sum(pts * pts, axis=1))
    index = np.flatnonzero(r <= 4. * a)
    index = index[::max(index.size // 16, 1)]
    direct = dens.values.reshape(-1)[index]
    scaled = np.atleast_1d(density_scaled(spec, t, s, pts[index] if spec.d > 1 else pts[index, 0], grid, quad))
    error = float(np.max(np.abs(scaled - direct) / np.abs(direct)))
    return check("relative_error", error, upper=tol)


def _fd_order(spec, t, s, grid, dens, quad):
    """
    Order of the centered difference error against the spectral gradient when the step is halved.
    """
    a = spec.profile.inverse(s - t)
    h = min(dens.step, a / 8.)
    n = grid.size(1)
    errors = []
    for k in (1, 2):
        g = _aligned(grid, k * n, h / k)
        p = density_fft(spec, t, s, g, quad)
        dp = gradient(spec, t, s, g, quad)[0]
        # nodes of the coarse grid, in the indexing of the current one
        idx = np.arange(k, k * n - k, k)
        fd = (p.values[idx + 1] - p.values[idx - 1]) / (2. * p.step)
        keep = np.abs(p.x[idx]) <= 4. * a
        errors.append(float(np.max(np.abs(dp.values[idx][keep] - fd[keep]))))
    return float(np.log2(errors[0] / errors[1]))


def _gradient_constant(spec, t, lam, grid, quad):
    a = spec.profile.inverse(lam)
    grads = gradient(spec, t, t + lam, grid, quad)
    norm = np.sqrt(sum(g.values.reshape(-1) ** 2 for g in grads))
    pts = grads[0].grid.points().reshape(-1, spec.d)
    r = np.sqrt(np.sum(pts * pts, axis=1))
    keep = (r <= 20. * a) & (r <= 0.45 * grads[0].grid.length)
    return float(np.max(norm[keep] * a / (lam * rho(spec.profile, lam, r[keep]))))


def _gradient_checks(spec, t, s, grid, dens, tolerances, quad):
    out = []
    if spec.d == 1:
        out.append(check("fd_order", _fd_order(spec, t, s, grid, dens, quad), lower=tolerances['order']))
    constants = [_gradient_constant(spec, t, (s - t) * f, grid, quad) for f in LADDER]
    out.append(check("constant", constants[0]))
    out.append(check("drift", _drift(constants), upper=tolerances['drift']))
    return out


def _fine_density(spec, t, lam, grid, quad):
    """Density on [t, t + lam] with a step resolving the operator, step <= phi^{-1}(lam)/16."""
    dens = density_fft(spec, t, t + lam, grid, quad)
    a = spec.profile.inverse(lam)
    if dens.step <= a / 16.:
        return dens
    return density_fft(spec, t, t + lam, _aligned(grid, dens.grid.n, a / 32.), quad)


def _fractional_checks(spec, t, s, grid, tolerances, quad):
    out = []
    constants = []
    for f in LADDER:
        lam = (s - t) * f
        a = spec.profile.inverse(lam)
        dens = _fine_density(spec, t, lam, grid, quad)
        worst = 0.
        for u in (0., 0.5, 1., 2., 4.):
            x = np.zeros(spec.d)
            x[0] = u * a
            _, absolute = delta_phi_apply(dens, spec, x, FIRST_ORDER, quad=quad)
            worst = max(worst, absolute / rho(spec.profile, lam, u * a))
        constants.append(worst)
        if f == 1. and spec.symmetric_in_z:
            x = np.zeros(spec.d)
            x[0] = a
            first, absolute = delta_phi_apply(dens, spec, x, FIRST_ORDER, quad=quad)
            second, _ = delta_phi_apply(dens, spec, x, SECOND_DIFFERENCE, quad=quad)
            out.append(check("branches", abs(first - second) / absolute, upper=1e-4))
    out.append(check("constant", constants[0]))
    out.append(check("drift", _drift(constants), upper=tolerances['drift']))
    return out


def _two_sided_frozen(spec, t, s, grid, dens, ledger, key, tolerances, quad):
    lo, hi = ratio_bracket(dens, spec.profile)
    doubled = density_fft(spec, t, s, _aligned(grid, 2 * dens.grid.n, dens.step / 2.), quad)
    lo2, hi2 = ratio_bracket(doubled, spec.profile)
    change = max(abs(lo2 - lo) / lo, abs(hi2 - hi) / hi)
    return [check("lower", lo), check("upper", hi),
            replace(ledger.bracket(key, lo, hi, tolerances['doubling']), name="ledger"),
            check("grid_doubling", change, upper=tolerances['doubling'])]


def _dependence(spec, t, s, grid, quad):
    sweep = perturbation_sweep(spec, t, s, grid=grid, quad=quad)
    return [check("ratio_min", float(np.min(sweep.ratios)), lower=0.45),
            check("ratio_max", float(np.max(sweep.ratios)), upper=0.55)]


def _validate_frozen(config, spec, report, ledger, key, quad):
    t, s = config.window
    grid = config.grid_config()
    tol = config.tolerances
    todo = config.validation
    dens = density_fft(spec, t, s, grid, quad)

    if todo['mass']:
        report.add(check("mass", abs(dens.mass - 1.), upper=tol['mass']))
        report.add(check("nonnegative", dens.min_value, passed=not dens.ringing))
    if todo['two_sided']:
        report.run("two_sided", _two_sided_frozen, spec, t, s, grid, dens, ledger, key, tol, quad)
    if todo['scaling']:
        bound = tol['scaling_power'] if spec.profile.family == 'power_law' else tol['scaling_general']
        report.run("scaling", _scaling_check, spec, t, s, dens, grid, bound, quad)
    if todo['gradient']:
        report.run("gradient", _gradient_checks, spec, t, s, grid, dens, tol, quad)
    if todo['fractional']:
        report.run("fractional", _fractional_checks, spec, t, s, grid, tol, quad)
    if todo['dependence']:
        report.run("dependence", _dependence, spec, t, s, grid, quad)


# VARIABLE CHECKS

def _contraction(spec, t, eps0, pcfg, bank, tolerances, quad):
    q = solve_q(spec, t, t + eps0, pcfg, bank=bank, quad=quad)
    return [check("ratio", q.contraction, upper=tolerances['contraction']),
            check("residual", q.residual, upper=3. * q.tol),
            check("terms", float(q.terms))], q


def _validate_variable(config, spec, report, ledger, key, quad):
    t, s = config.window
    tol = config.tolerances
    todo = config.validation
    pcfg = config.parametrix_config()
    bank = SymbolBank(spec, pcfg, quad)
    eps0 = epsilon0(spec, pcfg, bank, quad=quad)
    report.add(check("eps0", eps0))
    field = heat_kernel(spec, t, s, eps0, pcfg, bank, quad)

    if todo['mass']:
        report.add(check("mass", field.mass_error, upper=tol['mass']))
        report.add(check("nonnegative", field.min_value, passed=not field.negative))
    if todo['two_sided']:
        lo, hi = two_sided_ratio(field, spec.profile)
        report.add(check("two_sided.lower", lo))
        report.add(check("two_sided.upper", hi))
        report.add(replace(ledger.bracket(key, lo, hi, tol['doubling']), name="two_sided.ledger"))
    if todo['ck']:
        ck = ck_residual(spec, t, s, eps0, cfg=pcfg, bank=bank, quad=quad)
        report.add(check("ck", ck.residual, upper=tol['ck']))
    q = None
    if todo['contraction'] or todo['holder']:
        checks, q = _contraction(spec, t, eps0, pcfg, bank, tol, quad)
        if todo['contraction']:
            for c in checks:
                report.add(replace(c, name="contraction.{}".format(c.name)))
    if todo['holder']:
        report.add(check("holder", holder_sweep(q).ratio_max))
    if todo['duhamel']:
        for form in (FORWARD, BACKWARD):
            d = duhamel_check(spec, t, min(s, t + eps0), eps0, form, cfg=pcfg, bank=bank, quad=quad)
            report.add(check("duhamel.{}".format(form), d.error, upper=tol['duhamel']))
    if todo['near_diagonal']:
        near = near_diagonal_sweep(spec, eps0, pcfg, bank, quad=quad)
        report.add(check("near_diagonal.c1", float(np.max(near.c1))))
        report.add(check("near_diagonal.delta", np.nan if near.delta is None else near.delta))


@typechecked
def cmd_validate(config: ExperimentConfig, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> ValidationReport:
    """
    Runs the enabled checks of the first window.

    Frozen kernels: conservativeness, two-sided bracket, scaling identity, gradient
    and fractional-operator bounds, continuous dependence. Variable kernels:
    conservativeness, two-sided bracket, Chapman-Kolmogorov residual, Picard
    contraction, and optionally the Duhamel identities, the Holder sweep of q and
    the near-diagonal lower bound.

    Brackets missing from the regression ledger are certified and saved.
    """
    folder = _folder(config)
    profile = config.build_profile()
    spec = config.build_kernel(profile)
    report = ValidationReport('validate', config_id(config))
    ledger = RegressionLedger(config.ledger_path)
    t, s = config.window
    key = "{}/{}/{}/{:g}-{:g}/two_sided".format(config.kind, spec.name, profile.name, t, s)

    if config.kind == FROZEN:
        _validate_frozen(config, spec, report, ledger, key, quad)
    else:
        _validate_variable(config, spec, report, ledger, key, quad)
    ledger.save()
    return _finish(report, folder)


# SIMULATION

def _row_cdf(field, a):
    row = field.values[a]
    F = 0.5 * field.tail_mass[a] + field.step * (np.cumsum(row) - 0.5 * row)
    F = np.clip(F, 0., 1.)
    return lambda v: np.interp(v, field.x, F)


def _cf_frequencies(spec, t, s):
    xi = np.linspace(0.25, 2., 8) / spec.profile.inverse(s - t)
    if spec.d == 1:
        return xi
    return np.stack([xi, np.zeros_like(xi)], axis=1)


def _passage_checks(config, spec, cfg, folder, quad):
    settings = config.passage_settings()
    t, _ = config.window
    exit_ = exit_time_stats(spec, settings['x0'], settings['radius'], cfg=cfg, t=t,
                            precision=config.precision, quad=quad)
    exit_.to_frame().to_csv(os.path.join(folder, "exit_time.csv"), index=False, float_format='%.10g')
    hit = hitting_prob_stats(spec, settings['x0'], settings['y0'], settings['radius'], settings['gamma'],
                             cfg=cfg, t=t, precision=config.precision, quad=quad)
    return [check("exit", exit_.p_gamma, upper=0.5 + 2. * exit_.se_gamma, passed=exit_.passed),
            check("exit_C0", exit_.C0),
            check("hitting", hit.c1, passed=hit.passed)]


@typechecked
def cmd_simulate(config: ExperimentConfig, quad: QuadratureConfig=DEFAULT_QUADRATURE) -> ValidationReport:
    """
    Samples the process on the first window and compares it with the computed density.

    Raises
    ------
    StatisticsError
      When the number of paths is below the budget of the configured precision.
    """
    folder = _folder(config)
    profile = config.build_profile()
    spec = config.build_kernel(profile)
    cfg = config.sim_config()
    check_budget(cfg, config.precision)
    report = ValidationReport('simulate', config_id(config))
    t, s = config.window
    todo = config.validation
    manifest = {}

    if config.kind == FROZEN:
        samples = simulate_frozen(spec, t, s, cfg, quad=quad)
        if (todo['ks'] or todo['gaussian']) and spec.d == 1:
            dist = GridDistribution(density_fft(spec, t, s, config.grid_config(), quad))
            ks = ks_distance(samples.values[:, 0], dist.cdf)
            report.add(check("ks", ks.distance, upper=ks.critical))
            report.add(check("ks_pvalue", ks.pvalue))
        if todo['gaussian'] and spec.d == 1:
            # Differences below the KS noise floor mean the small jumps are negligible
            flipped = replace(cfg, gaussian_correction=not cfg.gaussian_correction)
            other = ks_distance(simulate_frozen(spec, t, s, flipped, quad=quad).values[:, 0], dist.cdf)
            report.add(check("gaussian_toggle", abs(other.distance - ks.distance), upper=ks.critical))
        if todo['cf']:
            xi = _cf_frequencies(spec, t, s)
            cf = cf_check(samples.values, xi, characteristic_exponent(spec, t, s, xi, quad))
            report.add(check("cf", cf.worst, upper=cf.bound))
    else:
        if spec.d != 1:
            raise DomainError("Variable kernels are simulated in d=1.")
        pcfg = config.parametrix_config()
        bank = SymbolBank(spec, pcfg, quad)
        field = heat_kernel(spec, t, s, None, pcfg, bank, quad)
        a = int(np.argmin(np.abs(field.x - float(config.slices[0]))))
        samples = simulate_variable_euler(spec, t, s, cfg, x0=float(field.x[a]), quad=quad)
        if todo['ks']:
            ks = ks_distance(samples.values[:, 0], _row_cdf(field, a))
            # Euler scheme: twice the frozen threshold
            report.add(check("ks", ks.distance, upper=2. * ks.critical))
            report.add(check("ks_pvalue", ks.pvalue))

    samples.to_csv(os.path.join(folder, "samples.csv"))
    manifest["samples.csv"] = {'columns': list(samples.to_frame().columns),
                               'description': "Positions at time s of paths started at x0 at time t."}
    if todo['passage']:
        report.run("passage", _passage_checks, config, spec, cfg, folder, quad)
        manifest["exit_time.csv"] = {'columns': ['r', 'probability', 'stderr', 'ci_low', 'ci_high', 'ratio'],
                                     'description': "P(exit from B(x0, radius) before t + r)."}
    write_manifest(folder, manifest)
    return _finish(report, folder)


COMMANDS = {
    'profile': cmd_profile_report,
    'density': cmd_density,
    'validate': cmd_validate,
    'simulate': cmd_simulate,
}


#---------#---------#---------#---------#---------#---------#---------#---------#---------#
