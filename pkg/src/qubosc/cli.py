"""Command-line front end: evolve, sweep, jumps, oracle-report, convergence."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import runner
from .evolve import convergence_check
from .exceptions import InvalidParameter, InvariantViolation, TruncationError
from .model import Liouvillian

_CONFIG_HELP = (
    "Config file sections/keys: [scenario] name, initial (ground|thermal|coherent), "
    "alpha, n_max, measures (comma list of "
    "negativity,K_r,K_sigma,purity,trace_error,min_eig,re_a,im_a,sz); "
    "[params] omega0, epsilon_z, lambda0, gamma (qubit rate, 1/tau0), "
    "c (oscillator rate, 1/tau0), temperature_ratio (hbar*omega0/kT); "
    "[integrator] steps_per_period, samples_per_period, periods, pulses (on|off). "
    "Unknown sections or keys are errors."
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubosc",
        description="Simulate a pulsed qubit coupled to a dissipative oscillator.",
        epilog=_CONFIG_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="integrate one scenario and write a trajectory CSV")
    p.add_argument("--config", required=True, help="scenario config file")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    p = sub.add_parser("sweep", help="sweep Gamma = C over a range and tabulate N_max, t_max")
    p.add_argument("--config", required=True, help="base scenario config file")
    p.add_argument("--gamma-start", type=float, required=True, help="first rate, units 1/tau0")
    p.add_argument("--gamma-end", type=float, required=True, help="last rate, inclusive")
    p.add_argument("--gamma-step", type=float, required=True, help="rate increment")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker processes (default: ${runner.WORKERS_ENV} or 1)")

    p = sub.add_parser("jumps", help="find discontinuities in t_max across a sweep CSV")
    p.add_argument("--in", dest="infile", required=True, help="sweep CSV from the sweep command")
    p.add_argument("--threshold", type=float, default=1.0, help="jump threshold in units of tau0")

    p = sub.add_parser("oracle-report", help="compare numerics with closed-form references")
    p.add_argument("--config", required=True, help="scenario config file")

    p = sub.add_parser("convergence", help="re-run at dt/2 and n_max+16 and report drift")
    p.add_argument("--config", required=True, help="scenario config file")
    p.add_argument("--measure", default="negativity", help="trajectory column to compare")
    p.add_argument("--tolerance", type=float, default=1e-5)
    return parser


def _cmd_evolve(args: argparse.Namespace) -> int:
    scenario = runner.parse_config(args.config)
    traj = runner.run_scenario(scenario)
    text = runner.trajectory_csv(traj, scenario.params.tau0)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = runner.parse_config(args.config)
    if args.gamma_step <= 0:
        raise InvalidParameter("--gamma-step must be > 0")
    n = int(round((args.gamma_end - args.gamma_start) / args.gamma_step)) + 1
    if n < 1:
        raise InvalidParameter("empty gamma range")
    gammas = [args.gamma_start + k * args.gamma_step for k in range(n)]
    table = runner.sweep_decoherence(scenario, gammas, workers=args.workers)
    text = runner.sweep_csv(table)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if any(r.error for r in table.rows) else 0


def _cmd_jumps(args: argparse.Namespace) -> int:
    table = runner.read_sweep_csv(args.infile)
    jumps = runner.detect_jumps(table, args.threshold)
    if not jumps:
        print("no jumps above threshold")
        return 0
    for j in jumps:
        print(f"jump between gamma_tau={j.gamma_left:g} and {j.gamma_right:g}: "
              f"t_max shifts by {j.delta_t:+g} tau0")
    return 0


def _cmd_oracle_report(args: argparse.Namespace) -> int:
    scenario = runner.parse_config(args.config)
    checks = runner.oracle_report(scenario)
    sys.stdout.write(runner.report_text(checks))
    return 0 if all(c.passed for c in checks) else 1


def _cmd_convergence(args: argparse.Namespace) -> int:
    scenario = runner.parse_config(args.config)
    liou = Liouvillian(scenario.params, scenario.space())
    report = convergence_check(
        runner.build_initial(scenario),
        liou,
        scenario.integrator(),
        measure=args.measure,
        tolerance=args.tolerance,
    )
    status = "PASS" if report.passed else "FAIL"
    print(f"{status}  {args.measure}: max deviation {report.max_deviation:.3e} "
          f"(tol {report.tolerance:g})")
    return 0 if report.passed else 1


_COMMANDS = {
    "evolve": _cmd_evolve,
    "sweep": _cmd_sweep,
    "jumps": _cmd_jumps,
    "oracle-report": _cmd_oracle_report,
    "convergence": _cmd_convergence,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    np.seterr(over="raise", invalid="raise")
    try:
        return _COMMANDS[args.command](args)
    except (InvalidParameter, InvariantViolation, TruncationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
