"""``sc-negativity`` command line entry point.

Exit codes: 0 success, 1 usage or parse error, 2 conjecture violation found,
3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import io
from .dynamics import AdditiveObservable, evolve_closed_form, negativity_time_series, rk4_trajectory
from .errors import ParseError, ScNegativityError, ValidationFailed
from .explorer import DEFAULT_RESTARTS, minimize_over_local_bases, write_counterexample
from .mixtures import assemble_mixture, component_negativity_sum, mixture_negativity_bound
from .negativity import band_bound, distance_to_diagonal, negativity_exact, negativity_sc_closed_form
from .selftest import SUITES, format_table, run_selftest
from .states import detect_sc, sc_embed

EXIT_OK, EXIT_USAGE, EXIT_FINDING, EXIT_INVALID = 0, 1, 2, 3
RK4_AGREEMENT_TOL = 1e-6
SC_DETECT_TOL = 1e-12


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _human(x: float) -> str:
    return format(float(x), ".6g")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        io.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _require_in(args) -> str:
    if not args.input:
        raise ParseError("--in PATH is required for this command")
    return args.input


def cmd_negativity(args) -> int:
    rho, sc = io.decode_state(io.load_json(_require_in(args)), tol=args.tol.get("validation"))
    if sc is None and rho.dims.n1 == rho.dims.n2:
        sc = detect_sc(rho, SC_DETECT_TOL)
    exact = negativity_exact(rho).value
    record = {"exact": exact}
    if sc is not None:
        delta, _ = band_bound(sc)
        record.update(
            closed_form=negativity_sc_closed_form(sc).value,
            distance=distance_to_diagonal(sc_embed(sc)),
            band_delta=delta,
        )
    if args.json or args.out:
        text = json.dumps(record, indent=2) + "\n"
        _emit(text, args.out)
        if not args.json:
            sys.stdout.write(f"wrote {args.out}\n")
        return EXIT_OK
    lines = [f"exact negativity: {_human(exact)}"]
    if sc is not None:
        lines += [
            f"closed-form negativity: {_human(record['closed_form'])}",
            f"distance to diagonal d(rho, rho'): {_human(record['distance'])}",
            f"band width delta: {record['band_delta']}",
        ]
    else:
        lines.append("state is not Schmidt-correlated in the computational basis")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = io.decode_model(io.load_json(_require_in(args)))
    if args.t_max < 0 or args.steps < 1:
        raise ParseError("need --t-max >= 0 and --steps >= 1")
    times = [0.0] if args.t_max == 0 or args.steps == 1 else np.linspace(0.0, args.t_max, args.steps).tolist()
    series = negativity_time_series(model, times)
    header = ["t", "negativity"]
    columns = [series.times, series.values]
    if args.check_rk4 is not None:
        rho0 = sc_embed(evolve_closed_form(model, 0.0))
        obs = AdditiveObservable(np.diag(model.spectrum1), np.diag(model.spectrum2))
        traj = rk4_trajectory(rho0, obs, series.times, args.check_rk4)
        rk4 = [negativity_exact(r).value for r in traj]
        worst = max(abs(a - b) for a, b in zip(rk4, series.values))
        if worst > RK4_AGREEMENT_TOL:
            raise ValidationFailed(f"RK4 negativity deviates from the closed form by {worst:.3g}")
        header.append("rk4")
        columns.append(rk4)
    rows = [",".join(header)] + [",".join(_num(c[i]) for c in columns) for i in range(len(series.times))]
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    mix = io.decode_mixture(io.load_json(_require_in(args)))
    exact = negativity_exact(assemble_mixture(mix)).value
    bound = mixture_negativity_bound(mix)
    record = {"exact": exact, "bound": bound, "gap": bound - exact, "component_sum": component_negativity_sum(mix)}
    if args.json or args.out:
        _emit(json.dumps(record, indent=2) + "\n", args.out)
        if not args.json:
            sys.stdout.write(f"wrote {args.out}\n")
    else:
        sys.stdout.write(
            f"exact negativity: {_human(exact)}\n"
            f"mixture bound: {_human(bound)}\n"
            f"gap: {_human(bound - exact)}\n"
        )
    return EXIT_OK


def cmd_explore(args) -> int:
    if args.restarts < 1:
        raise ParseError("--restarts must be at least 1")
    rho, _ = io.decode_state(io.load_json(_require_in(args)), tol=args.tol.get("validation"))
    report = minimize_over_local_bases(rho, args.restarts, args.seed, jobs=args.jobs)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    if report.satisfied:
        return EXIT_OK
    target = args.counterexample or (f"{args.out}.counterexample.json" if args.out else "counterexample.json")
    write_counterexample(target, rho, report, label=str(args.input))
    sys.stderr.write(f"bound violated; counterexample written to {target}\n")
    return EXIT_FINDING


def cmd_selftest(args) -> int:
    results = run_selftest(args.seed, args.jobs, args.corrupt)
    _emit(format_table(results), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVALID


def _tolerances(items: Sequence[str]) -> dict:
    known = {"validation"}
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or key not in known:
            raise ParseError(f"tolerance override must be one of {sorted(known)} as KEY=VALUE, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise ParseError(f"tolerance {key} is not a number: {value!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="PATH", help="input JSON file")
    common.add_argument("--out", metavar="PATH", help="write output here (atomically) instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent work items")
    common.add_argument("--tol", action="append", metavar="KEY=VALUE", help="tolerance override, e.g. validation=1e-8")

    parser = _Parser(prog="sc-negativity", description="Negativity of bipartite and Schmidt-correlated states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("negativity", parents=[common], help="negativity of a state file")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_negativity)

    p = sub.add_parser("simulate", parents=[common], help="negativity time series of a dephasing model")
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=101, help="number of time samples")
    p.add_argument("--check-rk4", type=float, metavar="DT", help="add an RK4 column with step DT")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bound", parents=[common], help="mixture bound for a lambda-SC mixture file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("explore", parents=[common], help="minimize the off-diagonal sum over local bases")
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--counterexample", metavar="PATH")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("selftest", parents=[common], help="run the embedded invariant suites")
    p.add_argument("--corrupt", choices=[s[0] for s in SUITES], help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.tol = _tolerances(args.tol)
        if args.jobs < 1:
            raise ParseError("--jobs must be at least 1")
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValidationFailed as exc:
        sys.stderr.write(f"validation failed: {exc}\n")
        return EXIT_INVALID
    except ScNegativityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
