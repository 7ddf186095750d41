"""Command-line front end.

Exit codes: 0 ok, 1 inequality violation found by ``certify``, 2 usage or
validation error, 3 I/O error while writing output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, sweeps
from .errors import GeurError
from .measure import MeasurementAssignment, ProjectiveMeasurement, measurement_from_json, parse_pairing, pauli
from .states import load_state

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def observable(token: str) -> ProjectiveMeasurement:
    """``X``/``Y``/``Z`` or a path to a JSON unitary whose columns form the basis."""
    if token.upper() in ("X", "Y", "Z"):
        return pauli(token)
    try:
        with open(token, encoding="utf-8") as fh:
            return measurement_from_json(json.load(fh), name=token)
    except OSError as exc:
        raise UsageError(f"observable {token!r} is neither X/Y/Z nor a readable JSON file: {exc}")
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad measurement file {token!r}: {exc}")


def assignment(text: str, target: str) -> MeasurementAssignment:
    return MeasurementAssignment(tuple((observable(o), m) for o, m in parse_pairing(text)), target)


def observables(text: str, n: int = 2) -> list[ProjectiveMeasurement]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if len(items) != n:
        raise UsageError(f"expected {n} observables, got {text!r}")
    return [observable(t) for t in items]


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    sweeps.write_atomic(out, text)


def cmd_fig3_sweep(args) -> int:
    start = 0.0 if args.start is None else args.start
    end = sweeps.HALF_PI if args.end is None else args.end
    grid = sweeps.linear_grid(start, end, args.points or 9, 0.0, sweeps.HALF_PI)
    rows = sweeps.fig3_rows(grid, assignment(args.pairing, "A"))
    _emit(sweeps.render(rows, sweeps.FIG3_COLUMNS, args.format, "geur.fig3_sweep/1"), args.out)
    return EXIT_OK


def cmd_fig4_sweep(args) -> int:
    start = 0.0 if args.start is None else args.start
    end = 1.0 if args.end is None else args.end
    grid = sweeps.linear_grid(start, end, args.points or 11, 0.0, 1.0)
    r, k = observables(args.observables)
    rows = sweeps.fig4_rows(grid, r, k)
    _emit(sweeps.render(rows, sweeps.FIG4_COLUMNS, args.format, "geur.fig4_sweep/1"), args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    try:
        rho = load_state(args.state_file)
    except OSError as exc:
        raise UsageError(f"cannot read state file: {exc}") from None
    scenario = args.scenario
    if scenario == "theorem1":
        pairs = parse_pairing(args.pairing or "X:B,Z:C")
        if len(pairs) != 2:
            raise UsageError("theorem1 takes exactly two OBS:MEMORY pairs")
        (r, mr), (k, mk) = pairs
        report = bounds.theorem1_report(rho, observable(r), mr, observable(k), mk, args.target)
    elif scenario == "theorem2":
        report = bounds.geur_report(rho, assignment(args.pairing or sweeps.DEFAULT_PAIRING, args.target))
    elif scenario == "berta":
        r, k = observables(args.observables or "X,Z")
        report = bounds.berta_bound(rho, r, k, args.target, args.memory)
    else:
        r, k = observables(args.observables or "Y,Z")
        parties = [p.strip() for p in args.parties.split(",")]
        if len(parties) != 3:
            raise UsageError(f"--parties needs ALICE,BOB,EVE, got {args.parties!r}")
        report = bounds.key_rate_report(rho, r, k, *parties)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    summary = bounds.certify(
        args.trials, args.n_qubits, args.seed, args.scenario, random_bases=args.random_bases
    )
    if args.format == "json":
        text = json.dumps(summary.to_dict(), indent=2) + "\n"
    else:
        text = summary.summary_line() + "\n"
    _emit(text, args.out)
    return EXIT_OK if summary.passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geur", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def sweep_flags(p, what):
        p.add_argument("--points", type=int, help="grid points (inclusive linear grid)")
        p.add_argument("--start", type=float, help=f"first {what} value")
        p.add_argument("--end", type=float, help=f"last {what} value")
        p.add_argument("--out", help="output file (written atomically); stdout if omitted")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p3 = sub.add_parser("fig3-sweep", help="GHZ(theta) sweep of the three-measurement bound")
    sweep_flags(p3, "theta")
    p3.add_argument("--pairing", default=sweeps.DEFAULT_PAIRING, help="OBS:MEMORY list, default %(default)s")
    p3.set_defaults(func=cmd_fig3_sweep)

    p4 = sub.add_parser("fig4-sweep", help="Werner(p) sweep of the key-rate bounds")
    sweep_flags(p4, "p")
    p4.add_argument("--observables", default="Y,Z", help="R,K observables, default %(default)s")
    p4.set_defaults(func=cmd_fig4_sweep)

    pb = sub.add_parser("bound", help="evaluate one bound on a state file, JSON on stdout")
    pb.add_argument("state_file")
    pb.add_argument("--scenario", type=str.lower, choices=("theorem1", "theorem2", "berta", "key-rate"), default="theorem1")
    pb.add_argument("--pairing", help="OBS:MEMORY list (theorem1 default X:B,Z:C; theorem2 X:B,Y:C,Z:D)")
    pb.add_argument("--observables", help="R,K observables (berta default X,Z; key-rate Y,Z)")
    pb.add_argument("--target", default="A", help="measured subsystem, default %(default)s")
    pb.add_argument("--memory", default="B", help="shared memory for berta, default %(default)s")
    pb.add_argument("--parties", default="A,B,D", help="ALICE,BOB,EVE for key-rate, default %(default)s")
    pb.add_argument("--out", help=argparse.SUPPRESS)
    pb.set_defaults(func=cmd_bound)

    pc = sub.add_parser("certify", help="fuzz an inequality over random mixed states")
    pc.add_argument("--scenario", default="Theorem1", help=f"one of {', '.join(bounds.SCENARIOS)}")
    pc.add_argument("--trials", type=int, default=1000)
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--n-qubits", type=int, default=None)
    pc.add_argument("--random-bases", action="store_true", help="random qubit bases instead of Paulis")
    pc.add_argument("--format", choices=("text", "json"), default="text")
    pc.add_argument("--out", help="summary file; stdout if omitted")
    pc.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GeurError, UsageError) as exc:
        print(f"geur {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"geur {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
