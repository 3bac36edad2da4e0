"""``he4film`` command line.

Subcommands: coefficients, dispersion, solve, simulate, verify.
Exit codes: 0 ok, 1 physics or verification failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from . import acceptance
from . import dispersion as disp
from . import io
from .errors import ConfigError, He4FilmError, NonFinite, NoPositiveQ
from .fields import Grid
from .params import (
    ANGSTROM,
    ParameterSet,
    RotonMassWarning,
    coefficient_report,
    coefficients_from_roton,
    dimensionless_coefficients,
    film_to_config,
    load_config,
    preset,
)
from .solutions import (
    build_cosine_wave,
    build_elliptic_wave,
    build_quartic_soliton,
    cosine_Q_roots,
    cosine_grid,
    cosine_state,
    cosine_threshold_speed,
    dimensionless_cosine,
    elliptic_Q_roots,
    materialize,
    quartic_Q_roots,
    sech2_state,
    soliton_grid,
)
from .spectral import SolverConfig, run, stable_timestep
from .verify import ode43_residual, periodic_window, soliton_window


class UsageError(Exception):
    """Bad flag combination not caught by argparse."""


# --------------------------------------------------------------------------
# shared helpers


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--config", type=Path, help="JSON parameter file")
    g.add_argument("--case", type=int, choices=(1, 2), help="built-in parameter set (default 1)")
    g.add_argument("--zeta0", type=float, help="mean film thickness in Angstrom (overrides config)")
    g.add_argument("--out", type=Path, help="output directory")
    g.add_argument("--precision", type=int, default=io.DEFAULT_PRECISION,
                   help="significant digits in CSV output (default 9)")
    g.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED,
                   help="seed for randomized acceptance checks; dynamics are deterministic")
    return common


def _parameters(args) -> ParameterSet:
    if args.config is not None and args.case is not None:
        raise UsageError("give either --config or --case, not both")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RotonMassWarning)
        if args.config is not None:
            ps = load_config(args.config)
        else:
            ps = ParameterSet(film=preset(args.case or 1))
        if args.zeta0 is not None:
            if not args.zeta0 > 0:
                raise ConfigError("must be positive", field="zeta0")
            ps = ParameterSet(film=ps.film.with_zeta0(args.zeta0 * ANGSTROM), hydro=ps.hydro, extra=ps.extra)
    return ps


def _resolved(ps: ParameterSet, args) -> dict:
    out = {"film": film_to_config(ps.film), "case": args.case, "precision": args.precision}
    if ps.hydro is not None:
        out["hydro"] = {"gamma": ps.hydro.gamma, "rho": ps.hydro.rho, "q": ps.hydro.q, "f_r": ps.hydro.f_r}
    return out


def _finish(args, command, argv, ps, outputs, extra_params=None):
    """Write the run manifest next to ``outputs`` (only when --out is given)."""
    if args.out is None:
        return
    params = _resolved(ps, args) if ps is not None else {}
    if extra_params:
        params.update(extra_params)
    path = args.out / "manifest.json"
    io.write_json(path, io.manifest(command, argv, args.config, params, [*outputs, path]))


def _emit_json(args, name, obj):
    if args.out is None:
        sys.stdout.write(io.dumps(obj))
        return []
    return [io.write_json(args.out / name, obj)]


# --------------------------------------------------------------------------
# coefficients


def cmd_coefficients(args, argv) -> int:
    ps = _parameters(args)
    outputs = _emit_json(args, "coefficients.json", coefficient_report(ps))
    _finish(args, "coefficients", argv, ps, outputs)
    return 0


# --------------------------------------------------------------------------
# dispersion


def cmd_dispersion(args, argv) -> int:
    ps = _parameters(args)
    if args.k_max < args.k_min:
        raise UsageError("--k-max must be >= --k-min")
    if args.n_points < 1:
        raise UsageError("--n-points must be >= 1")
    k, energy, valid = disp.dispersion_table(ps.film, args.k_min, args.k_max, args.n_points)
    rows = ((kk, e if ok else "", "true" if ok else "false") for kk, e, ok in zip(k, energy, valid))
    header = ["k_per_angstrom", "E_over_kB_K", "valid"]
    if args.out is None:
        io.write_csv_stream(sys.stdout, header, rows, args.precision)
        outputs = []
    else:
        outputs = [io.write_csv(args.out / "dispersion.csv", header, rows, args.precision)]
    if not np.all(valid):
        bad = k[~valid]
        print(f"warning: E(k)^2 < 0 for {bad.size} rows, k in [{bad.min():.6g}, {bad.max():.6g}] /A",
              file=sys.stderr)
    _finish(args, "dispersion", argv, ps, outputs,
            {"k_min": args.k_min, "k_max": args.k_max, "n_points": args.n_points})
    return 0


# --------------------------------------------------------------------------
# solve


def _pick(roots, index, what):
    if not roots:
        raise NoPositiveQ(f"the {what} quadratic in Q has no admissible root")
    if not 0 <= index < len(roots):
        raise UsageError(f"--root {index} out of range; {what} roots: {['%.6g' % r for r in roots]}")
    return roots[index]


def build_solution(ps: ParameterSet, args):
    p = ps.film
    c = coefficients_from_roton(p)
    if args.kind == "quartic":
        Q = _pick(quartic_Q_roots(p, c), args.root, "soliton")
        return build_quartic_soliton(p, c, Q, velocity_sign=args.velocity_sign, c0_sign=args.c0_sign)
    if args.kind == "cosine":
        Q = _pick(cosine_Q_roots(p, c), args.root, "cosine")
        v = args.velocity_sign * args.v_ratio * cosine_threshold_speed(p, Q)
        return build_cosine_wave(p, c, v, Q, amplitude_sign=args.amplitude_sign, c0_sign=args.c0_sign)
    if args.modulus is None:
        raise UsageError("--kind elliptic needs --modulus")
    sol = build_elliptic_wave(p, c, args.modulus, None if args.root is None else
                              _pick(elliptic_Q_roots(p, c, args.modulus), args.root, "elliptic"),
                              velocity_sign=args.velocity_sign, c0_sign=args.c0_sign)
    return sol


def cmd_solve(args, argv) -> int:
    ps = _parameters(args)
    if args.kind != "elliptic" and args.root is None:
        args.root = 0
    sol = build_solution(ps, args)
    if sol.is_periodic:
        window, method = periodic_window(sol), "spectral"
    else:
        window, method = soliton_window(sol), "fd8"
    numeric = ode43_residual(sol, sol.ode, window, method=method)
    analytic = ode43_residual(sol, sol.ode, window, method="analytic")
    report = {
        "solution": sol.to_dict(),
        "weak_excitation": sol.weak_excitation,
        "residual": {"numeric": numeric.to_dict(), "analytic": analytic.to_dict()},
        "passed": numeric.passed and analytic.passed,
    }
    if args.require_weak and not sol.weak_excitation:
        report["passed"] = False
        report["failed_condition"] = "weak excitation |amplitude|/zeta0 <= 0.2"
    outputs = _emit_json(args, "solution.json", report)
    if args.out is not None:
        coeffs = dimensionless_coefficients(ps.film)
        if sol.is_periodic:
            grid = Grid(args.n_points, args.periods * sol.period / coeffs.l_scale)
        else:
            grid = soliton_grid(sol, coeffs, n_points=args.n_points)
        state = materialize(sol, ps.film, grid, coeffs=coeffs, allow_extrapolated=True)
        outputs.append(io.write_profile_csv(args.out / "profile.csv", state, args.precision))
    _finish(args, "solve", argv, ps, outputs, {"kind": args.kind})
    if not report["passed"]:
        print(f"error: {report.get('failed_condition', 'residual gate failed')}", file=sys.stderr)
        return 1
    return 0


# --------------------------------------------------------------------------
# simulate


def initial_state(ps: ParameterSet, args):
    """(state, coefficients) for --initial."""
    coeffs = dimensionless_coefficients(ps.film)
    if args.initial == "file":
        if args.checkpoint is None:
            raise UsageError("--initial file needs --checkpoint PATH")
        return io.read_checkpoint(args.checkpoint, scales=coeffs), coeffs
    if args.initial == "cosine":
        q0, _ = dimensionless_cosine(coeffs, args.branch)
        return cosine_state(coeffs, cosine_grid(q0, args.n_points, args.periods), 0.0, args.branch), coeffs
    if args.initial == "dark":
        length = args.widths / args.inverse_width
        grid = Grid(args.n_points, length)
        return sech2_state(grid, args.amplitude, args.inverse_width, coeffs=coeffs), coeffs
    p = ps.film
    c = coefficients_from_roton(p)
    Q = _pick(quartic_Q_roots(p, c), args.root, "soliton")
    sol = build_quartic_soliton(p, c, Q)
    grid = soliton_grid(sol, coeffs, n_points=args.n_points, widths=args.widths)
    return materialize(sol, p, grid, coeffs=coeffs, wrap_phase=True, allow_extrapolated=True), coeffs


def cmd_simulate(args, argv) -> int:
    if args.out is None:
        raise UsageError("simulate needs --out DIR")
    ps = _parameters(args)
    start, coeffs = initial_state(ps, args)
    grid = start.grid
    dtau = args.dtau if args.dtau is not None else stable_timestep(coeffs, grid, float(start.density.max()))
    cfg = SolverConfig(grid.n_points, grid.domain_length, dtau, args.steps, args.stride, args.dealiasing)
    snap_every = args.snapshot_stride
    if snap_every < 0 or snap_every % cfg.output_stride:
        raise UsageError("--snapshot-stride must be 0 or a multiple of --stride")
    out = args.out
    series = []
    snapshots = io.SnapshotWriter(out / "snapshots.csv", args.precision)

    def sink(state, obs):
        # called at step 0, every stride and at the last step
        series.append(obs)
        n = round((state.tau - start.tau) / cfg.dtau)
        if snap_every and (n % snap_every == 0 or n == cfg.n_steps):
            snapshots(state)

    run_params = {"initial": args.initial, "dtau": dtau, "n_steps": cfg.n_steps, "n_points": cfg.n_points,
                  "domain_length": cfg.domain_length, "output_stride": cfg.output_stride,
                  "dealiasing": cfg.dealiasing, "snapshot_stride": snap_every, "meta": start.meta}
    outputs = [snapshots.path]
    try:
        with snapshots:
            final, _ = run(start, coeffs, cfg, sink=sink)
    except NonFinite as exc:
        outputs.append(io.write_observables_csv(out / "observables.csv", series, args.precision))
        if exc.last_good is not None:
            outputs.append(io.write_checkpoint(out / "last_good.he4f", exc.last_good))
        _finish(args, "simulate", argv, ps, outputs, {**run_params, "failed_at_step": exc.step})
        raise
    outputs.append(io.write_observables_csv(out / "observables.csv", series, args.precision))
    outputs.append(io.write_checkpoint(out / "final.he4f", final))
    _finish(args, "simulate", argv, ps, outputs, run_params)
    return 0


# --------------------------------------------------------------------------
# verify


def cmd_verify(args, argv) -> int:
    if args.config is not None or args.case is not None or args.zeta0 is not None:
        print("note: the acceptance suite uses the built-in parameter sets; "
              "--config/--case/--zeta0 are ignored", file=sys.stderr)
    unknown = set(args.suite or ()) - set(acceptance.SUITES)
    if unknown:
        raise UsageError(f"unknown suite(s) {sorted(unknown)}; choose from {acceptance.SUITES}")
    results = []
    stream = sys.stdout if args.out is not None else sys.stderr
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RotonMassWarning)
        for r in acceptance.run_suite(args.suite, seed=args.seed, perturb_a2=args.perturb_a2):
            print(r.line(), file=stream, flush=True)
            results.append(r)
    passed = all(r.passed for r in results)
    report = {"passed": passed, "n_criteria": len(results), "n_failed": sum(not r.passed for r in results),
              "suites": args.suite or acceptance.SUITES, "perturb_a2": args.perturb_a2, "seed": args.seed,
              "criteria": [r.to_dict() for r in results]}
    outputs = _emit_json(args, "verify.json", report)
    _finish(args, "verify", argv, None, outputs,
            {"suites": args.suite or acceptance.SUITES, "perturb_a2": args.perturb_a2, "seed": args.seed})
    return 0 if passed else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="he4film", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coefficients", parents=[common], help="physical and dimensionless coefficients (JSON)")
    p.set_defaults(func=cmd_coefficients)

    p = sub.add_parser("dispersion", parents=[common], help="E(k)/k_B table (CSV)")
    p.add_argument("--k-min", type=float, default=0.0, help="1/Angstrom (default 0)")
    p.add_argument("--k-max", type=float, default=2.5, help="1/Angstrom (default 2.5)")
    p.add_argument("--n-points", type=int, default=501)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("solve", parents=[common], help="closed-form traveling wave plus residual report")
    p.add_argument("--kind", choices=("quartic", "cosine", "elliptic"), required=True)
    p.add_argument("--modulus", type=float, help="elliptic modulus k, 0 < k < 1")
    p.add_argument("--v-ratio", type=float, default=1.005, help="cosine speed over its threshold v0")
    p.add_argument("--root", type=int, help="index into the ascending admissible Q roots (default 0)")
    p.add_argument("--amplitude-sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--velocity-sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--c0-sign", type=int, choices=(1, -1), default=-1)
    p.add_argument("--require-weak", action="store_true",
                   help="fail unless |amplitude|/zeta0 is within the weak-excitation limit")
    p.add_argument("--n-points", type=int, default=1024, help="profile CSV grid size")
    p.add_argument("--periods", type=int, default=2, help="periods in the profile CSV (periodic kinds)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate", parents=[common], help="split-step run of the dimensionless equation")
    p.add_argument("--initial", choices=("quartic", "dark", "cosine", "file"), default="quartic")
    p.add_argument("--checkpoint", type=Path, help="input checkpoint for --initial file")
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--stride", type=int, default=100, help="observable output stride")
    p.add_argument("--snapshot-stride", type=int, default=1000, help="steps between snapshots (0: none)")
    p.add_argument("--dtau", type=float, help="time step (default: stability bound)")
    p.add_argument("--n-points", type=int, default=2048)
    p.add_argument("--widths", type=float, default=40.0, help="box length in pulse widths")
    p.add_argument("--amplitude", type=float, default=-0.5, help="dark pulse amplitude A/zeta0")
    p.add_argument("--inverse-width", type=float, default=1.0, help="dark pulse inverse width (dimensionless)")
    p.add_argument("--branch", choices=("minus", "plus"), default="minus", help="cosine branch")
    p.add_argument("--periods", type=int, default=1, help="cosine periods in the box")
    p.add_argument("--root", type=int, default=0, help="soliton Q root index")
    p.add_argument("--dealiasing", choices=("none", "two_thirds"), default="none")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--suite", action="append", help=f"restrict to a suite (repeatable): {', '.join(acceptance.SUITES)}")
    p.add_argument("--perturb-a2", type=float, default=0.0,
                   help="relative perturbation of a2 in the PDE residual (negative control)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except He4FilmError as exc:
        cond = getattr(exc, "condition", None)
        name = type(exc).__name__
        print(f"error: {name}: {exc}" + (f" [condition: {cond}]" if cond else ""), file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
