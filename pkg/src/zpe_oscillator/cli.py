"""Command-line entry point: ``zpe <command> [options]``.

Exit status: 0 success, 1 verification failure, 2 usage error, 3 numeric
domain or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import discrete_spectrum as ds
from . import historical, moments, montecarlo, phase_space, spectrum
from . import statistical_ensemble as se
from . import variance_law as vl
from .errors import ConvergenceError, DomainError, NonFiniteError, TruncationError
from .verification import run_suite

COMMANDS = ("spectrum", "variance", "discrete", "moments", "statistical", "wigner", "historical", "mc", "verify")
SAMPLERS = ("levels", "ws", "phase", "modes")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _json_safe(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def render_report(rows, fmt: str, meta: dict | None = None) -> str:
    if not rows:
        raise ValueError("report has no rows")
    header = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row[h]) for h in header])
        return buf.getvalue()
    if fmt == "json":
        doc = {"meta": _json_safe(meta or {}), "rows": [_json_safe(r) for r in rows]}
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit_report(rows, fmt: str, path: str | None, meta: dict | None = None) -> None:
    """Write rows as CSV (17 significant digits) or JSON (``meta`` + ``rows``).

    ``path`` of ``None`` or ``"-"`` writes to standard output.
    """
    text = render_report(rows, fmt, meta)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def beta_values(args) -> np.ndarray:
    lo, hi, count = args.beta_min, args.beta_max, args.beta_count
    if not (lo > 0 and hi > 0 and math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError("beta range bounds must be positive")
    if hi < lo:
        raise UsageError(f"--beta-max ({hi}) is below --beta-min ({lo})")
    if count < 1:
        raise UsageError("--beta-count must be at least 1")
    if count == 1:
        return np.array([lo])
    return np.geomspace(lo, hi, count) if args.beta_log else np.linspace(lo, hi, count)


def _model(args) -> spectrum.OscillatorModel:
    if args.e0 is not None:
        if args.e0 <= 0:
            raise DomainError(f"--e0 must be positive to define a frequency, got {args.e0}")
        return spectrum.OscillatorModel.from_e0(args.e0, hbar=args.hbar, k=args.k, mass=args.mass)
    return spectrum.OscillatorModel(args.omega, hbar=args.hbar, k=args.k, mass=args.mass)


def _e0(args) -> float:
    if args.e0 is not None and args.e0 == 0:
        return 0.0
    return _model(args).e0


def cmd_spectrum(args):
    e0 = _e0(args)
    rows = []
    for b in beta_values(args):
        b = float(b)
        pt = spectrum.thermo_point(e0, b, k=args.k)
        u_t = spectrum.thermal_mean_energy(e0, b) if e0 > 0 else pt.u
        rows.append({"beta": b, "U": pt.u, "U_T": u_t, "sigma2": pt.sigma2, "C_V": pt.cv, "S": pt.s, "Z": pt.z})
    return rows


def cmd_variance(args):
    e0 = _e0(args)
    if args.a1 is None and args.a2 is None:
        ansatz = vl.derive_planck_ansatz(e0)
    else:
        ansatz = vl.VarianceAnsatz.from_ground_energy(e0, args.a1 or 0.0, args.a2 or 1.0)
    betas = beta_values(args)
    numeric = vl.integrate_mean_energy(ansatz, betas)
    rows = []
    for b, u_num in zip(betas, numeric):
        b = float(b)
        u = vl.solve_mean_energy(ansatz, b)
        row = {"beta": b, "a0": ansatz.a0, "a1": ansatz.a1, "a2": ansatz.a2, "q": ansatz.q,
               "U": u, "U_ode": float(u_num), "sigma2_of_U": vl.variance_from_u(ansatz, u),
               "sigma2_of_beta": vl.dispersion_vs_beta(ansatz, b)}
        row["wien_residual"] = (vl.wien_consistency_residual(ansatz, None, b)
                                if not ansatz.is_classical else 0.0)
        rows.append(row)
    return rows


def cmd_discrete(args):
    e0 = _e0(args)
    rows = []
    for b in beta_values(args):
        b = float(b)
        spec = ds.build_spectrum(e0, b)
        rows.append({
            "beta": b, "n_max": spec.n_max, "Z": spec.z, "w0": float(spec.weights[0]),
            "U_levels": ds.discrete_average(spec, lambda e: e),
            "U_closed": spectrum.planck_mean_energy(e0, b),
            "S_shannon": spec.shannon_entropy(), "S_closed": spectrum.entropy(e0, b),
            "n_bar": ds.mean_occupation(e0, b),
        })
    return rows


def cmd_moments(args):
    e0 = _e0(args)
    rows = []
    for b in beta_values(args):
        b = float(b)
        table = moments.moment_table(e0, b, range(0, args.max_order + 1))
        for r, value in zip(table.orders, table.values):
            res = moments.recurrence_residual(e0, b, r, relative=True) if 1 <= r < moments.MAX_ORDER else 0.0
            rows.append({"beta": b, "r": r, "moment": value, "recurrence_residual_rel": res})
    return rows


def cmd_statistical(args):
    e0 = _e0(args)
    rows = []
    for b in beta_values(args):
        d = se.decompose_fluctuations(e0, float(b))
        rows.append({"beta": float(b), "U": d.u_total, "U_T": d.u_thermal, "e0": d.e0,
                     "var_total": d.var_total, "var_thermal": d.var_thermal,
                     "var_zero_point": d.var_zero_point, "covariance": d.covariance,
                     "S_statistical": se.statistical_entropy(d.u_total, args.k)})
    return rows


def cmd_wigner(args):
    model = _model(args)
    rows = []
    for b in beta_values(args):
        b = float(b)
        g = phase_space.PhaseSpaceGaussian.equilibrium(model, b)
        rows.append({"beta": b, "U": g.u, "var_p": g.var_p, "var_q": g.var_q,
                     "uncertainty_product": phase_space.uncertainty_product(model, b),
                     "heisenberg_bound": model.hbar**2 / 4.0,
                     "peak_density": float(phase_space.wigner_density(0.0, 0.0, g))})
    return rows


def cmd_historical(args):
    e0 = _e0(args)
    cross = historical.crossover_temperature(e0)
    rows = []
    for b in beta_values(args):
        b = float(b)
        u_t = spectrum.thermal_mean_energy(e0, b)
        wave, particle = historical.einstein_terms(u_t, e0)
        rows.append({"beta": b, "U_T": u_t, "U_T_interpolation": historical.reconstruct_planck_from_interpolation(e0, b, args.k),
                     "U_T_wien": spectrum.wien_approximation(e0, b),
                     "d2S_dU2": historical.planck_d2s(u_t, e0, args.k) if u_t > 0 else float("-inf"),
                     "wave_term": wave, "particle_term": particle,
                     "particle_dominated": b > cross})
    return rows


def cmd_mc(args):
    model = _model(args)
    e0 = model.e0
    rng = montecarlo.RngContract(args.seed)
    kinds = SAMPLERS if args.sampler == "all" else (args.sampler,)
    rows = []
    for i, b in enumerate(beta_values(args)):
        b = float(b)
        u = spectrum.planck_mean_energy(e0, b)
        expected = {"levels": (u, spectrum.energy_variance(e0, b)), "ws": (u, u * u),
                    "phase": (u, u * u), "modes": (1.0, 1.0 - 1.0 / args.modes)}
        for j, kind in enumerate(kinds):
            contract = rng.child(i * len(SAMPLERS) + SAMPLERS.index(kind))
            if kind == "levels":
                batch = montecarlo.sample_discrete_levels(e0, b, args.samples, contract)
            elif kind == "ws":
                batch = montecarlo.sample_ws(u, args.samples, contract)
            elif kind == "phase":
                g = phase_space.PhaseSpaceGaussian.equilibrium(model, b)
                batch = montecarlo.sample_phase_space(g, args.samples, contract)
            else:
                batch = montecarlo.mode_interference_experiment(args.modes, args.samples, contract)
            row = {"beta": b}
            row.update(batch.record())
            row["expected_mean"], row["expected_variance"] = expected[kind]
            rows.append(row)
    return rows


def cmd_verify(args):
    return [r.row() for r in run_suite(args.seed, samples=args.samples or 200_000, n_modes=args.modes)]


HANDLERS = {
    "spectrum": cmd_spectrum, "variance": cmd_variance, "discrete": cmd_discrete,
    "moments": cmd_moments, "statistical": cmd_statistical, "wigner": cmd_wigner,
    "historical": cmd_historical, "mc": cmd_mc, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zpe", description="Harmonic oscillator thermodynamics with zero-point energy")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--e0", type=float, default=None, help="zero-point energy (overrides --omega)")
    parser.add_argument("--omega", type=float, default=2.0)
    parser.add_argument("--hbar", type=float, default=1.0)
    parser.add_argument("--k", type=float, default=1.0)
    parser.add_argument("--mass", type=float, default=1.0)
    parser.add_argument("--beta", type=float, default=None, help="single inverse temperature")
    parser.add_argument("--beta-min", type=float, default=1e-2)
    parser.add_argument("--beta-max", type=float, default=1e2)
    parser.add_argument("--beta-count", type=int, default=50)
    parser.add_argument("--beta-log", action=argparse.BooleanOptionalAction, default=True)
    parser.add_argument("--seed", type=int, default=None, help="64-bit seed (fallback: $ZPE_SEED, then 0)")
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--modes", type=int, default=1000, help="modes in the interference experiment")
    parser.add_argument("--sampler", choices=SAMPLERS + ("all",), default="all")
    parser.add_argument("--max-order", type=int, default=6)
    parser.add_argument("--a1", type=float, default=None)
    parser.add_argument("--a2", type=float, default=None)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default="-", metavar="PATH")
    return parser


def resolve_config(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        env = os.environ.get("ZPE_SEED")
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            parser.error(f"ZPE_SEED must be an integer, got {env!r}")
    if not 0 <= args.seed < 2**64:
        parser.error("--seed must be a 64-bit unsigned integer")
    if args.beta is not None:
        args.beta_min = args.beta_max = args.beta
        args.beta_count = 1
    if args.samples is None and args.command == "mc":
        args.samples = 100_000
    if args.samples is not None and args.samples < 1:
        parser.error("--samples must be positive")
    if args.modes < 2:
        parser.error("--modes must be at least 2")
    if not 0 <= args.max_order < moments.MAX_ORDER + 1:
        parser.error(f"--max-order must lie in [0, {moments.MAX_ORDER}]")
    try:
        beta_values(args)
    except UsageError as exc:
        parser.error(str(exc))
    return args


def run(argv=None) -> int:
    args = resolve_config(argv)
    config = {k: v for k, v in sorted(vars(args).items())}
    try:
        rows = HANDLERS[args.command](args)
    except (DomainError, TruncationError, ConvergenceError, NonFiniteError, ArithmeticError) as exc:
        sys.stderr.write(f"zpe {args.command}: numeric error: {exc}\n  parameters: {json.dumps(_json_safe(config))}\n")
        return EXIT_NUMERIC
    meta = {"version": __version__, "seed": args.seed, "config": config}
    try:
        emit_report(rows, args.format, args.out, meta)
    except OSError as exc:
        sys.stderr.write(f"zpe: cannot write report: {exc}\n")
        return EXIT_NUMERIC
    if args.command == "verify" and not all(r["passed"] for r in rows):
        failed = [f"{r['module']}.{r['check']}" for r in rows if not r["passed"]]
        sys.stderr.write("zpe verify: failed checks: " + ", ".join(failed) + "\n")
        return EXIT_FAIL
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
