"""Acceptance gate: one test per criterion, each logging a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v``; the collected lines are
printed in the terminal summary under "acceptance criteria".
"""

import math
import time

import numpy as np

from zpe_oscillator import cli, spectrum
from zpe_oscillator.discrete_spectrum import build_spectrum, discrete_average
from zpe_oscillator.historical import reconstruct_planck_from_interpolation
from zpe_oscillator.montecarlo import (
    RngContract,
    exponential_ks,
    mode_interference_experiment,
    sample_discrete_levels,
    sample_phase_space,
    sample_ws,
)
from zpe_oscillator.numerics import central_difference
from zpe_oscillator.phase_space import PhaseSpaceGaussian, uncertainty_product
from zpe_oscillator.spectrum import OscillatorModel
from zpe_oscillator.statistical_ensemble import decompose_fluctuations
from zpe_oscillator.variance_law import (
    VarianceAnsatz,
    integrate_mean_energy,
    solve_mean_energy,
    wien_consistency_residual,
)

BETAS = np.geomspace(1e-2, 1e2, 50)
E0S = (0.5, 1.0, 2.0)
SEED = 20240601


class Gate:
    def __init__(self, log, tag, title):
        self.log, self.tag, self.title = log, tag, title
        self.start = time.perf_counter()

    def finish(self, passed, detail, budget=None):
        elapsed = time.perf_counter() - self.start
        if budget is not None:
            passed = passed and elapsed < budget
            detail = f"{detail}; {elapsed:.2f} s (budget {budget:g} s)"
        self.log(self.tag, self.title, passed, detail)
        assert passed, detail


def test_ac01_planck_law_vs_levels(acceptance_log):
    gate = Gate(acceptance_log, 1, "closed-form mean energy vs level sums")
    worst = 0.0
    for e0 in E0S:
        for b in BETAS:
            levels = discrete_average(build_spectrum(e0, b), lambda e: e)
            closed = spectrum.planck_mean_energy(e0, b)
            worst = max(worst, abs(closed - levels) / levels)
    gate.finish(worst < 1e-10, f"max rel gap {worst:.3e} < 1e-10 over 50x3 grid", budget=1.0)


def _random_ansatze(count):
    gen = np.random.default_rng(SEED)
    out = []
    for i in range(count):
        e0 = gen.uniform(0.1, 3.0)
        a2 = gen.uniform(0.3, 3.0)
        a1 = gen.uniform(-0.5, 2.0)
        if a1 + 2 * a2 * e0 < 0:
            a1 = 0.0
        if i % 5 == 4:  # classical member: q = 0 with a0 = a1 = 0
            out.append(VarianceAnsatz(0.0, 0.0, a2))
        else:
            out.append(VarianceAnsatz.from_ground_energy(e0, a1, a2))
    return out


def test_ac02_closed_form_vs_ode(acceptance_log):
    gate = Gate(acceptance_log, 2, "closed-form ansatz solution vs adaptive ODE")
    betas = np.geomspace(0.05, 20.0, 25)
    worst = 0.0
    ansatze = _random_ansatze(20)
    for a in ansatze:
        assert a.q >= 0
        numeric = integrate_mean_energy(a, betas)
        closed = solve_mean_energy(a, betas)
        worst = max(worst, float(np.max(np.abs(numeric - closed) / np.abs(closed))))
    gate.finish(worst < 1e-8, f"max rel gap {worst:.3e} < 1e-8 over {len(ansatze)} ansatz triples", budget=10.0)


def test_ac03_wien_forces_zero_linear_term(acceptance_log):
    gate = Gate(acceptance_log, 3, "displacement-law residual selects a1 = 0")
    betas = np.geomspace(0.1, 10.0, 50)
    zero = VarianceAnsatz.from_ground_energy(1.0, 0.0, 1.0)
    half = VarianceAnsatz.from_ground_energy(1.0, 0.5, 1.0)
    r0 = max(abs(wien_consistency_residual(zero, 1.0, float(b))) for b in betas)
    r_half = max(abs(wien_consistency_residual(half, 1.0, float(b))) for b in betas)
    gate.finish(r0 < 1e-10 and r_half > 1e-3,
                f"a1=0 max |r| {r0:.3e} < 1e-10; a1=0.5 max |r| {r_half:.3e} > 1e-3", budget=1.0)


def test_ac04_fluctuation_dissipation(acceptance_log):
    gate = Gate(acceptance_log, 4, "variance equals -dU/dbeta")
    worst = 0.0
    for e0 in E0S:
        for b in BETAS:
            b = float(b)
            # dU/dbeta = dU_T/dbeta; differencing U_T avoids cancellation against e0
            slope = central_difference(lambda x: spectrum.thermal_mean_energy(e0, x), b, max(1e-6, 1e-4 * b))
            var = spectrum.energy_variance(e0, b)
            worst = max(worst, abs(var + slope) / var)
    cold = spectrum.energy_variance(1.0, 50.0)
    gate.finish(worst < 1e-6 and cold < 1e-40,
                f"max rel gap {worst:.3e} < 1e-6; sigma2(50, 1) = {cold:.3e} < 1e-40", budget=1.0)


def test_ac05_interpolation_reconstruction(acceptance_log):
    gate = Gate(acceptance_log, 5, "entropy-interpolation route reproduces the thermal law")
    worst = 0.0
    for e0 in E0S:
        for b in np.geomspace(0.1, 10.0, 20):
            got = reconstruct_planck_from_interpolation(e0, float(b))
            ref = spectrum.thermal_mean_energy(e0, float(b))
            worst = max(worst, abs(got - ref) / ref)
    gate.finish(worst < 1e-8, f"max rel gap {worst:.3e} < 1e-8 on beta in [0.1, 10]", budget=5.0)


def test_ac06_fluctuation_decomposition(acceptance_log):
    gate = Gate(acceptance_log, 6, "thermal and zero-point fluctuations do not covary")
    worst = 0.0
    for e0 in E0S:
        for b in BETAS:
            d = decompose_fluctuations(e0, float(b))
            worst = max(worst, abs(d.covariance) / d.var_total)
    classical_exact = True
    for b in BETAS:
        u = spectrum.planck_mean_energy(0.0, float(b))
        d = decompose_fluctuations(0.0, float(b))
        classical_exact &= d.var_total == u * u and spectrum.energy_variance(0.0, float(b)) == u * u
    gate.finish(worst < 1e-12 and classical_exact,
                f"max |Gamma|/var_total {worst:.3e} < 1e-12; e0=0 sigma2 == U^2 exactly: {classical_exact}",
                budget=1.0)


def test_ac07_uncertainty_bound(acceptance_log):
    gate = Gate(acceptance_log, 7, "position-momentum uncertainty bound")
    worst = math.inf
    for omega in (0.5, 1.0, 2.0, 4.0):
        model = OscillatorModel(omega=omega)
        for b in np.geomspace(1e-3, 1e3, 200):
            worst = min(worst, uncertainty_product(model, float(b)) - model.hbar**2 / 4)
    model = OscillatorModel(omega=2.0)
    gap = abs(uncertainty_product(model, 100.0) - 0.25)
    gate.finish(worst >= -1e-15 and gap < 1e-12,
                f"min excess {worst:.3e} >= -1e-15; |product - hbar^2/4| at beta=100: {gap:.3e} < 1e-12",
                budget=1.0)


def _within(estimate, expected, se):
    return abs(estimate - expected) <= 4 * se


def test_ac08_monte_carlo_concordance(acceptance_log):
    gate = Gate(acceptance_log, 8, "Monte Carlo samplers match closed forms")
    n = 1_000_000
    e0, beta = 1.0, 1.0
    u = spectrum.planck_mean_energy(e0, beta)
    rng = RngContract(SEED)
    levels = sample_discrete_levels(e0, beta, n, rng.child(1))
    ws = sample_ws(u, n, rng.child(2))
    g = PhaseSpaceGaussian.equilibrium(OscillatorModel.from_e0(e0), beta)
    phase = sample_phase_space(g, n, rng.child(3))
    checks = [
        ("levels", levels, u, spectrum.energy_variance(e0, beta)),
        ("ws", ws, u, u * u),
        ("phase", phase, u, u * u),
    ]
    parts, ok = [], True
    for name, batch, mean, var in checks:
        z_mean = abs(batch.mean - mean) / batch.std_error
        z_var = abs(batch.variance - var) / batch.variance_std_error
        ok &= _within(batch.mean, mean, batch.std_error) and _within(batch.variance, var, batch.variance_std_error)
        parts.append(f"{name} z(mean)={z_mean:.2f} z(var)={z_var:.2f}")
    modes = mode_interference_experiment(1000, n, rng.child(4))
    stat, crit = exponential_ks(modes.draws, 1.0)
    ok &= stat < crit
    parts.append(f"modes KS D={stat:.2e} < {crit:.2e}")
    gate.finish(ok, "; ".join(parts) + " (limit 4 SE)", budget=30.0)


def test_ac09_entropy_consistency(acceptance_log):
    gate = Gate(acceptance_log, 9, "thermodynamic entropy equals Shannon entropy of level weights")
    worst = 0.0
    for e0 in E0S:
        for b in BETAS:
            shannon = build_spectrum(e0, float(b)).shannon_entropy()
            worst = max(worst, abs(shannon - spectrum.entropy(e0, float(b))))
    cold = spectrum.entropy(1.0, 100.0)
    gate.finish(worst < 1e-10 and cold < 1e-80,
                f"max |gap| {worst:.3e} < 1e-10; S(beta=100) = {cold:.3e} < 1e-80", budget=1.0)


def test_ac10_verify_is_deterministic(acceptance_log, tmp_path):
    gate = Gate(acceptance_log, 10, "verify report is byte-identical across runs")
    reports, codes = [], []
    for name in ("first.csv", "second.csv"):
        path = tmp_path / name
        codes.append(cli.run(["verify", "--seed", str(SEED), "--out", str(path)]))
        reports.append(path.read_bytes())
    same = reports[0] == reports[1] and len(reports[0]) > 0
    gate.finish(same and codes == [0, 0], f"identical: {same}; exit codes {codes}")
