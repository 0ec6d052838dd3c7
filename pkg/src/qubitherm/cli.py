"""Command-line front end: parameter sweeps to CSV, oracle validation
runs, and Monte Carlo estimation experiments.

Exit status: 0 on success, 1 when a validation comparison fails, 2 on
usage or domain errors.  Angles are in radians; every quantity is
dimensionless.  CSV output is byte-deterministic: floats are written in
shortest round-trip form (at most 17 significant digits) and rows follow
lattice order.
"""

from __future__ import annotations

import argparse
import json
import math
import shlex
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, estimation, mle, models, validation
from .estimation import NoInformationError
from .models import Model, QubitPrep
from .qmath import pauli_decomposition

QUANTITIES = ("p0", "fisher", "qfi", "sld_coeffs", "tau_opt", "deficit")
PARAM_NAMES = ("beta", "theta", "phi", "tau")


@dataclass(frozen=True)
class SweepSpec:
    """A validated sweep request: fixed values, swept axes, quantities."""

    model: Model
    fixed: dict
    swept: tuple  # (name, start, stop, steps) per axis
    quantities: tuple

    def __post_init__(self):
        names = [s[0] for s in self.swept]
        if len(self.swept) > 2:
            raise ValueError("at most two swept parameters")
        if len(set(names)) != len(names):
            raise ValueError("duplicate swept parameter")
        if set(names) & {k for k, v in self.fixed.items() if v is not None}:
            raise ValueError("swept and fixed parameters must be disjoint")
        for name, start, stop, steps in self.swept:
            if name not in PARAM_NAMES:
                raise ValueError(f"unknown sweep parameter {name!r}")
            if steps < 2 or not start < stop:
                raise ValueError("sweep needs steps >= 2 and start < stop")
        for q in self.quantities:
            if q not in QUANTITIES:
                raise ValueError(f"unknown quantity {q!r}")
        if not self.quantities:
            raise ValueError("at least one quantity is required")
        beta_only = set(self.quantities) <= {"tau_opt"}
        if "beta" not in names and self.fixed.get("beta") is None:
            raise ValueError("beta must be swept or fixed")
        if not beta_only and "tau" not in names \
                and self.fixed.get("tau") is None:
            raise ValueError("tau must be swept or fixed (or 'opt')")

    def axes(self):
        return [np.linspace(start, stop, steps)
                for (_, start, stop, steps) in self.swept]


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_sweep(spec: str):
    try:
        name, rng = spec.split("=", 1)
        start, stop, steps = rng.split(":")
        name = name.strip()
        start, stop, steps = float(start), float(stop), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad sweep {spec!r}; expected name=start:stop:steps") from None
    if name not in PARAM_NAMES:
        raise argparse.ArgumentTypeError(f"unknown sweep parameter {name!r}")
    if steps < 2 or not start < stop:
        raise argparse.ArgumentTypeError(
            "sweep needs steps >= 2 and start < stop")
    return name, start, stop, steps


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitherm",
        description="Qubit-probe thermometry of a harmonic oscillator.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="tabulate quantities over a lattice")
    sweep.add_argument("--model", choices=("transverse", "dispersive"),
                       required=True)
    sweep.add_argument("--beta", type=float)
    sweep.add_argument("--theta", type=float, default=None,
                       help="preparation polar angle (default 0)")
    sweep.add_argument("--phi", type=float, default=None,
                       help="preparation azimuth (default 0)")
    sweep.add_argument("--tau", default=None,
                       help="fixed interaction time, or 'opt'")
    sweep.add_argument("--sweep", action="append", type=_parse_sweep,
                       default=[], metavar="name=start:stop:steps",
                       help="swept parameter (repeatable, at most twice)")
    sweep.add_argument("--quantities", required=True,
                       help="comma-separated subset of " + ",".join(QUANTITIES))
    sweep.add_argument("--out", required=True)

    val = sub.add_parser("validate", help="run the oracle cross-checks")
    val.add_argument("--profile", choices=("strict", "fast"), default="strict")
    val.add_argument("--out", default=None, help="JSON report path")

    est = sub.add_parser("estimate", help="Monte Carlo Cramer-Rao experiment")
    est.add_argument("--model", choices=("transverse", "dispersive"),
                     required=True)
    est.add_argument("--beta", type=float, required=True)
    est.add_argument("--theta", type=float, default=0.0)
    est.add_argument("--phi", type=float, default=0.0)
    est.add_argument("--tau", default="opt",
                     help="interaction time, or 'opt' for the optimum")
    est.add_argument("--measurements", type=int, default=10**5,
                     help="population measurements per replicate")
    est.add_argument("--replicates", type=int, default=1000)
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--out", required=True)
    return parser


def _resolve_tau(tau_arg, model: Model, beta: float, prep: QubitPrep) -> float:
    if isinstance(tau_arg, str) and tau_arg.strip().lower() == "opt":
        if model is Model.TRANSVERSE:
            return estimation.tau_opt_transverse(beta).tau
        f = lambda t: estimation.fisher_information(model, beta, prep, t)
        tau, _ = estimation.golden_max(f, 1e-3, math.pi - 1e-3, tol=1e-8)
        return tau
    return float(tau_arg)


def _sweep_columns(quantities):
    cols = []
    for q in quantities:
        cols.extend(("sld_id", "sld_x", "sld_y", "sld_z") if q == "sld_coeffs"
                    else (q,))
    return cols


def _sweep_row(model: Model, params, quantities):
    prep = QubitPrep(params["theta"], params["phi"] % (2.0 * math.pi))
    values = []
    for q in quantities:
        if q == "p0":
            values.append(estimation.outcome_probabilities(
                _state(model, params, prep), estimation.population_povm())[0])
        elif q == "fisher":
            values.append(estimation.fisher_information(
                model, params["beta"], prep, params["tau"]))
        elif q == "qfi":
            values.append(estimation.qfi(
                model, params["beta"], prep, params["tau"]))
        elif q == "sld_coeffs":
            l_op = estimation.sld(model, params["beta"], prep, params["tau"])
            values.extend(pauli_decomposition(l_op))
        elif q == "tau_opt":
            values.append(estimation.tau_opt_transverse(params["beta"]).tau)
        elif q == "deficit":
            values.append(estimation.fi_deficit(
                model, params["beta"], params["tau"]))
    return values


def _state(model: Model, params, prep):
    generator = (models.probe_state_transverse if model is Model.TRANSVERSE
                 else models.probe_state_dispersive)
    return generator(params["beta"], prep, params["tau"])


def cmd_sweep(args, invocation: str) -> int:
    quantities = tuple(q.strip() for q in args.quantities.split(",")
                       if q.strip())
    swept_names = [s[0] for s in args.sweep]
    spec = SweepSpec(
        model=Model.parse(args.model),
        fixed={"beta": args.beta, "theta": args.theta, "phi": args.phi,
               "tau": None if "tau" in swept_names else args.tau},
        swept=tuple(args.sweep),
        quantities=quantities)

    axes = spec.axes()
    lattice = [()] if not axes else None
    if axes:
        mesh = np.meshgrid(*axes, indexing="ij")
        lattice = np.stack([m.ravel() for m in mesh], axis=-1)

    header = swept_names + _sweep_columns(quantities)
    lines = [f"# {invocation}", f"# version: qubitherm {__version__}",
             ",".join(header)]
    for point in lattice:
        params = dict(spec.fixed)
        params["theta"] = params["theta"] if params["theta"] is not None else 0.0
        params["phi"] = params["phi"] if params["phi"] is not None else 0.0
        for name, value in zip(swept_names, point):
            params[name] = float(value)
        if "tau" not in swept_names and args.tau is not None:
            prep = QubitPrep(params["theta"], params["phi"] % (2 * math.pi))
            params["tau"] = _resolve_tau(args.tau, spec.model,
                                         params["beta"], prep)
        row = [params[n] for n in swept_names]
        row.extend(_sweep_row(spec.model, params, quantities))
        lines.append(",".join(_fmt(v) for v in row))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return 0


def cmd_validate(args, invocation: str) -> int:
    results, passed = validation.run_checks(args.profile)
    report = {
        "invocation": invocation,
        "version": __version__,
        "profile": args.profile,
        "passed": passed,
        "checks": results,
    }
    text = json.dumps(report, indent=2, default=str, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if not passed:
        worst = [r for r in results if not r["passed"]]
        for r in worst:
            print(f"FAILED {r['check']}: worst {r['worst']} at "
                  f"{r['worst_at']} (tol {r['tolerance']})", file=sys.stderr)
        return 1
    return 0


def cmd_estimate(args, invocation: str) -> int:
    model = Model.parse(args.model)
    prep = QubitPrep(args.theta, args.phi % (2 * math.pi))
    tau = _resolve_tau(args.tau, model, args.beta, prep)
    report = mle.crlb_experiment(model, args.beta, prep, tau,
                                 m=args.measurements,
                                 replicates=args.replicates, seed=args.seed)
    payload = {
        "invocation": invocation,
        "version": __version__,
        "inputs": {
            "model": args.model, "beta": args.beta, "theta": args.theta,
            "phi": args.phi, "tau": tau, "measurements": args.measurements,
            "replicates": args.replicates, "seed": args.seed,
        },
        "beta_true": report.beta_true,
        "beta_hat_mean": report.beta_hat_mean,
        "empirical_variance": report.empirical_variance,
        "crlb": report.crlb,
        "qcrlb": report.qcrlb,
        "ratio": report.ratio,
        "replicates": report.replicates,
        "excluded": report.excluded,
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    invocation = "qubitherm " + shlex.join(argv)
    try:
        if args.command == "sweep":
            return cmd_sweep(args, invocation)
        if args.command == "validate":
            return cmd_validate(args, invocation)
        return cmd_estimate(args, invocation)
    except (NoInformationError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
