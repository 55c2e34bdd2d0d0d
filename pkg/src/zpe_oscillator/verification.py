"""Invariant suite run by ``zpe verify``.

Each check yields a measured value, a bound and the relation that must
hold between them.  Everything is deterministic given the seed, so two runs
produce identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import discrete_spectrum as ds
from . import historical, moments, montecarlo, phase_space, spectrum
from . import statistical_ensemble as se
from . import variance_law as vl
from .numerics import central_difference, fd_step, relative_gap

E0_VALUES = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class CheckResult:
    module: str
    check: str
    value: float
    bound: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.relation == "<=":
            return self.value <= self.bound
        return self.value >= self.bound

    def row(self) -> dict:
        return {
            "module": self.module,
            "check": self.check,
            "value": self.value,
            "relation": self.relation,
            "bound": self.bound,
            "passed": self.passed,
        }


def beta_grid(lo=1e-2, hi=1e2, count=50):
    return np.geomspace(lo, hi, count)


def minus_du_dbeta(e0: float, beta: float) -> float:
    """-dU/dbeta by finite differences of the thermal part.

    ``dU/dbeta = dU_T/dbeta``; differencing ``U_T`` avoids the cancellation
    against ``e0`` that swamps the slope at low temperature.
    """
    if e0 == 0:
        f = lambda b: spectrum.planck_mean_energy(0.0, b)  # noqa: E731
    else:
        f = lambda b: spectrum.thermal_mean_energy(e0, b)  # noqa: E731
    return -central_difference(f, beta, fd_step(beta))


def random_ansatze(seed: int, count: int = 20):
    """Variance laws with a non-negative physical root, about one in five classical."""
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(101,))))
    out = []
    for i in range(count):
        a2 = float(gen.uniform(0.5, 2.0))
        if i % 5 == 4:
            a1 = float(gen.uniform(-1.0, 0.0))
            out.append(vl.VarianceAnsatz(a0=a1 * a1 / (4.0 * a2), a1=a1, a2=a2))
            continue
        e0 = float(gen.uniform(0.1, 2.0))
        a1 = float(gen.uniform(-a2 * e0, 1.0))
        out.append(vl.VarianceAnsatz.from_ground_energy(e0, a1, a2))
    return out


# --- spectrum -------------------------------------------------------------

def planck_vs_levels_gap(betas=None, e0s=E0_VALUES) -> float:
    betas = beta_grid() if betas is None else betas
    worst = 0.0
    for e0 in e0s:
        for b in betas:
            spec = ds.build_spectrum(e0, float(b))
            worst = max(worst, relative_gap(ds.discrete_average(spec, lambda e: e),
                                            spectrum.planck_mean_energy(e0, float(b))))
    return worst


def _spectrum_checks(seed):
    betas = beta_grid()
    yield CheckResult("spectrum", "planck_law_vs_level_sum_rel", planck_vs_levels_gap(betas), 1e-10)

    worst_lnz = worst_s = worst_cv = 0.0
    violations = 0
    for e0 in E0_VALUES:
        prev = math.inf
        for b in betas:
            b = float(b)
            u = spectrum.planck_mean_energy(e0, b)
            slope = -central_difference(lambda x: spectrum.log_partition_function(e0, x), b, fd_step(b))
            worst_lnz = max(worst_lnz, relative_gap(slope, u))
            log_z = spectrum.log_partition_function(e0, b) - math.log(2.0 * e0)
            worst_s = max(worst_s, abs(spectrum.entropy(e0, b) - (log_z + b * u)))
            worst_cv = max(worst_cv, relative_gap(spectrum.heat_capacity(e0, b), b * b * minus_du_dbeta(e0, b)))
            # strict decrease is tested on U_T: U itself rounds to e0 at low T
            u_t = spectrum.thermal_mean_energy(e0, b)
            if not (u_t < prev and u >= e0):
                violations += 1
            prev = u_t
    yield CheckResult("spectrum", "minus_dlnZ_dbeta_vs_U_rel", worst_lnz, 1e-6)
    yield CheckResult("spectrum", "entropy_vs_potential_abs", worst_s, 1e-10)
    yield CheckResult("spectrum", "heat_capacity_vs_fd_rel", worst_cv, 1e-6)
    yield CheckResult("spectrum", "U_decreasing_and_above_e0_violations", float(violations), 0.0)
    worst_w = max(spectrum.wien_scaling_check(spectrum.OscillatorModel(om), s, b)
                  for om in (1.0, 3.0) for s in (0.5, 2.0, 10.0) for b in (0.2, 1.0, 7.0))
    yield CheckResult("spectrum", "wien_displacement_scaling_abs", worst_w, 1e-12)


# --- variance_law ---------------------------------------------------------

def ode_equivalence_gap(seed: int, count: int = 20) -> float:
    betas = np.geomspace(0.05, 20.0, 25)
    worst = 0.0
    for ansatz in random_ansatze(seed, count):
        numeric = vl.integrate_mean_energy(ansatz, betas)
        closed = vl.solve_mean_energy(ansatz, betas)
        worst = max(worst, float(np.max(np.abs(numeric - closed) / np.abs(closed))))
    return worst


def wien_residual_range(a1: float, e0: float = 1.0, betas=None):
    betas = np.geomspace(0.1, 10.0, 40) if betas is None else betas
    ansatz = vl.VarianceAnsatz.from_ground_energy(e0, a1, 1.0)
    values = [abs(vl.wien_consistency_residual(ansatz, e0, float(b))) for b in betas]
    return min(values), max(values)


def _variance_law_checks(seed):
    yield CheckResult("variance_law", "ode_vs_closed_form_rel", ode_equivalence_gap(seed), 1e-8)
    yield CheckResult("variance_law", "wien_residual_a1_zero_max", wien_residual_range(0.0)[1], 1e-10)
    yield CheckResult("variance_law", "wien_residual_a1_half_min", wien_residual_range(0.5)[0], 1e-3, ">=")
    worst = 0.0
    for e0 in E0_VALUES:
        ansatz = vl.derive_planck_ansatz(e0)
        for b in beta_grid():
            b = float(b)
            sigma2 = vl.dispersion_vs_beta(ansatz, b)
            worst = max(worst, relative_gap(minus_du_dbeta(e0, b), sigma2))
    yield CheckResult("variance_law", "fluctuation_dissipation_rel", worst, 1e-6)
    high_t = abs(vl.solve_mean_energy(vl.derive_planck_ansatz(1.0), 1e-6) * 1e-6 - 1.0)
    yield CheckResult("variance_law", "high_temperature_U_beta_minus_1", high_t, 1e-4)


# --- discrete_spectrum ----------------------------------------------------

def _discrete_checks(seed):
    moment_gap = entropy_gap = zg_gap = ratio_gap = 0.0
    for e0 in E0_VALUES:
        for b in np.geomspace(0.05, 20.0, 15):
            b = float(b)
            spec = ds.build_spectrum(e0, b)
            u = spectrum.planck_mean_energy(e0, b)
            second = u * u + spectrum.energy_variance(e0, b)
            moment_gap = max(moment_gap,
                             relative_gap(ds.discrete_average(spec, lambda e: e), u),
                             relative_gap(ds.discrete_average(spec, lambda e: e * e), second))
            entropy_gap = max(entropy_gap, abs(spec.shannon_entropy() - spectrum.entropy(e0, b)))
            zg_gap = max(zg_gap, relative_gap(2.0 * e0 * spec.z, spectrum.partition_function(e0, b)))
            if spec.n_max > 0:
                w = spec.weights[:50]
                ratios = w[1:] / w[:-1]
                ratio_gap = max(ratio_gap, float(np.max(np.abs(ratios / spec.ratio - 1.0))))
    yield CheckResult("discrete_spectrum", "level_moments_vs_closed_form_rel", moment_gap, 1e-10)
    yield CheckResult("discrete_spectrum", "shannon_entropy_vs_closed_form_abs", entropy_gap, 1e-10)
    yield CheckResult("discrete_spectrum", "Zg_equals_2e0_Z_rel", zg_gap, 1e-12)
    yield CheckResult("discrete_spectrum", "geometric_weight_ratio_rel", ratio_gap, 1e-12)
    lng = max(ds.verify_lng_constancy(1.0, [0.5, 1.0, 2.0, 5.0]), ds.verify_lng_constancy(2.0, [0.1, 10.0]))
    yield CheckResult("discrete_spectrum", "mean_ln_g_constancy_spread", lng, 1e-8)


# --- moments --------------------------------------------------------------

def _moments_checks(seed):
    worst = 0.0
    for e0 in E0_VALUES:
        for b in (0.3, 1.0, 3.0):
            for r in range(1, 7):
                worst = max(worst, abs(moments.recurrence_residual(e0, b, r, relative=True)))
    yield CheckResult("moments", "recurrence_r1_to_6_rel", worst, 1e-5)
    spec = ds.build_spectrum(1.0, 50.0)
    mean = ds.discrete_average(spec, lambda e: e)
    var = ds.discrete_average(spec, lambda e: (e - mean) ** 2)
    yield CheckResult("moments", "variance_at_beta50", var, 1e-40)
    cov = abs(moments.covariance_identity_residual(1.0, 1.0, lambda e: np.exp(-e)))
    yield CheckResult("moments", "covariance_identity_exp_abs", cov, 1e-6)


# --- statistical_ensemble -------------------------------------------------

def _statistical_checks(seed):
    gamma = thermal = 0.0
    for e0 in (0.0,) + E0_VALUES:
        for b in beta_grid():
            b = float(b)
            d = se.decompose_fluctuations(e0, b)
            gamma = max(gamma, abs(d.covariance) / d.var_total)
            thermal = max(thermal, relative_gap(d.var_thermal, minus_du_dbeta(e0, b)))
    yield CheckResult("statistical_ensemble", "covariance_over_total_variance", gamma, 1e-12)
    yield CheckResult("statistical_ensemble", "thermal_variance_vs_fd_rel", thermal, 1e-6)
    classical = 0.0
    for b in beta_grid():
        u = spectrum.planck_mean_energy(0.0, float(b))
        classical = max(classical, abs(se.decompose_fluctuations(0.0, float(b)).var_total - u * u))
    yield CheckResult("statistical_ensemble", "classical_variance_equals_U2_abs", classical, 0.0)
    u = 1.5
    pdf = lambda e: se.ws_density(e, u)  # noqa: E731
    mom = max(abs(se.density_moment(pdf, 50 * u, 1) - u), abs(se.density_moment(pdf, 50 * u, 2) - 2 * u * u) / u)
    yield CheckResult("statistical_ensemble", "ws_moments_by_quadrature_abs", mom, 1e-9)
    s_exp = se.statistical_entropy(u)
    uniform = math.log(2.0 * u)  # uniform on [0, 2u]
    sig = u * math.sqrt(math.pi / 2.0)  # half-normal with mean u
    half_normal = se.density_entropy(lambda e: 2.0 * math.exp(-0.5 * (e / sig) ** 2) / (sig * math.sqrt(2 * math.pi)),
                                     12.0 * sig)
    yield CheckResult("statistical_ensemble", "maxent_margin_over_alternatives", s_exp - max(uniform, half_normal), 0.0, ">=")


# --- phase_space ----------------------------------------------------------

def _phase_space_checks(seed):
    g = phase_space.PhaseSpaceGaussian(1.0, 2.0, 1.5)
    yield CheckResult("phase_space", "wigner_normalization_abs", abs(phase_space.phase_space_average(g) - 1.0), 1e-9)
    p = np.linspace(-4, 4, 41)[:, None]
    q = np.linspace(-2, 2, 41)[None, :]
    fact = np.max(np.abs(phase_space.wigner_density(p, q, g)
                         - phase_space.momentum_marginal(p, g) * phase_space.position_marginal(q, g)))
    yield CheckResult("phase_space", "marginal_factorization_abs", float(fact), 1e-12)
    model = spectrum.OscillatorModel(omega=2.0)
    bound = model.hbar**2 / 4.0
    excess = min(phase_space.uncertainty_product(model, float(b)) - bound for b in np.geomspace(1e-2, 1e3, 80))
    yield CheckResult("phase_space", "heisenberg_excess_min", excess, -1e-15, ">=")
    gap = abs(phase_space.uncertainty_product(model, 100.0) - bound)
    yield CheckResult("phase_space", "heisenberg_saturation_beta100_abs", gap, 1e-12)
    marg = max(phase_space.energy_marginal_consistency(phase_space.PhaseSpaceGaussian(1.0, 1.0, 1.0)),
               phase_space.energy_marginal_consistency(phase_space.PhaseSpaceGaussian(2.0, 3.0, 0.7)))
    yield CheckResult("phase_space", "energy_marginal_vs_ws_abs", marg, 1e-8)


# --- historical -----------------------------------------------------------

def reconstruction_gap(betas=None, e0s=E0_VALUES) -> float:
    betas = np.geomspace(0.1, 10.0, 30) if betas is None else betas
    worst = 0.0
    for e0 in e0s:
        for b in betas:
            b = float(b)
            worst = max(worst, relative_gap(historical.reconstruct_planck_from_interpolation(e0, b),
                                            spectrum.thermal_mean_energy(e0, b)))
    return worst


def _historical_checks(seed):
    yield CheckResult("historical", "interpolation_reconstruction_rel", reconstruction_gap(), 1e-8)
    ein = three = 0.0
    for e0 in E0_VALUES:
        for b in beta_grid():
            b = float(b)
            u_t = spectrum.thermal_mean_energy(e0, b)
            fluct = historical.einstein_fluctuation(u_t, e0)
            ein = max(ein, relative_gap(fluct, minus_du_dbeta(e0, b)))
            from_law = vl.variance_about_root(vl.derive_planck_ansatz(e0), u_t)
            from_split = se.decompose_fluctuations(e0, b).var_thermal
            three = max(three, relative_gap(from_law, fluct), relative_gap(from_split, fluct),
                        relative_gap(from_law, from_split))
    yield CheckResult("historical", "einstein_fluctuation_vs_fd_rel", ein, 1e-6)
    yield CheckResult("historical", "three_way_variance_agreement_rel", three, 1e-10)
    cross = max(relative_gap(historical.crossover_temperature(e0), math.log(2.0) / (2.0 * e0)) for e0 in E0_VALUES)
    yield CheckResult("historical", "crossover_vs_ln2_over_2e0_rel", cross, 1e-12)


# --- montecarlo -----------------------------------------------------------

def _z(estimate, expected, se_):
    if se_ == 0.0:
        return 0.0 if estimate == expected else math.inf
    return abs(estimate - expected) / se_


def _montecarlo_checks(seed, samples, n_modes, mode_samples):
    rng = montecarlo.RngContract(seed)
    u1 = spectrum.planck_mean_energy(1.0, 1.0)
    var1 = spectrum.energy_variance(1.0, 1.0)
    b = montecarlo.sample_discrete_levels(1.0, 1.0, samples, rng.child(1))
    yield CheckResult("montecarlo", "levels_mean_z", _z(b.mean, u1, b.std_error), 4.0)
    yield CheckResult("montecarlo", "levels_variance_z", _z(b.variance, var1, b.variance_std_error), 4.0)
    b = montecarlo.sample_ws(u1, samples, rng.child(2))
    yield CheckResult("montecarlo", "ws_mean_z", _z(b.mean, u1, b.std_error), 4.0)
    yield CheckResult("montecarlo", "ws_variance_z", _z(b.variance, u1 * u1, b.variance_std_error), 4.0)
    g = phase_space.PhaseSpaceGaussian(1.0, 2.0, u1)
    b = montecarlo.sample_phase_space(g, samples, rng.child(3))
    yield CheckResult("montecarlo", "phase_space_energy_mean_z", _z(b.mean, u1, b.std_error), 4.0)
    yield CheckResult("montecarlo", "phase_space_energy_variance_z", _z(b.variance, u1 * u1, b.variance_std_error), 4.0)
    q = b.aux["q"]
    q_var_se = math.sqrt(2.0 / q.size) * g.var_q
    yield CheckResult("montecarlo", "phase_space_var_q_z", _z(float(np.var(q)), g.var_q, q_var_se), 4.0)
    b = montecarlo.mode_interference_experiment(n_modes, mode_samples, rng.child(4))
    stat, crit = montecarlo.exponential_ks(b.draws, 1.0)
    yield CheckResult("montecarlo", "mode_interference_ks_over_critical", stat / crit, 1.0)
    again = montecarlo.sample_ws(u1, 1000, rng.child(2))
    first = montecarlo.sample_ws(u1, 1000, rng.child(2))
    yield CheckResult("montecarlo", "determinism_mismatches",
                      float(np.count_nonzero(again.draws != first.draws)), 0.0)
    x = montecarlo.sample_ws(1.0, samples, rng.child(10)).draws
    y = montecarlo.sample_ws(1.0, samples, rng.child(11)).draws
    corr = abs(float(np.corrcoef(x, y)[0, 1]))
    yield CheckResult("montecarlo", "stream_correlation_times_sqrt_n", corr * math.sqrt(samples), 4.0)


def run_suite(seed: int = 0, samples: int = 200_000, n_modes: int = 1000, mode_samples: int = 20_000):
    results = []
    for group in (_spectrum_checks, _variance_law_checks, _discrete_checks, _moments_checks,
                  _statistical_checks, _phase_space_checks, _historical_checks):
        results.extend(group(seed))
    results.extend(_montecarlo_checks(seed, samples, n_modes, mode_samples))
    return results
