"""Command-line entry point.

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from .demos import DEMOS, UnknownDemo, run_demo, run_scenario
from .documents import dump_scenario, load_scenario
from .errors import DocumentError, NumericalError, TensionLabError
from .report import canonical_number, emit_report, format_number, report_tolerance
from .scenarios import (
    BUILTIN,
    classical_bound,
    joint_distribution_feasible,
    leggett_garg_scenario,
    outcome_values,
    quantum_value,
    term_values,
)

FORMATS = ("table", "json-lines", "csv")
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; bad usage is invalid input here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tensionlab", description="Quantum tension, contextuality and Bell-type bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="analyse a scenario document")
    run.add_argument("file")
    run.add_argument("--format", choices=FORMATS, default="table")

    demo = sub.add_parser("demo", help="run a built-in demonstration")
    demo.add_argument("name", help=", ".join(DEMOS))
    demo.add_argument("--format", choices=FORMATS, default="table")

    bound = sub.add_parser("bound", help="classical bound by exhaustive strategy enumeration")
    bound.add_argument("file")

    fine = sub.add_parser("fine", help="joint-distribution (LP) feasibility of the quantum moments")
    fine.add_argument("file")

    sweep = sub.add_parser("sweep", help="CSV of the Leggett-Garg combination over a theta grid")
    sweep.add_argument("family", choices=("leggett-garg",))
    sweep.add_argument("--from", dest="start", type=float, default=0.0)
    sweep.add_argument("--to", dest="stop", type=float, default=float(np.pi))
    sweep.add_argument("--steps", type=int, default=50)

    export = sub.add_parser("export", help="print a built-in scenario as a document")
    export.add_argument("name", choices=tuple(BUILTIN))
    return p


def _cmd_run(args) -> str:
    return emit_report(run_scenario(load_scenario(args.file), report_tolerance()), args.format)


def _cmd_demo(args) -> str:
    return emit_report(run_demo(args.name, report_tolerance()), args.format)


def _cmd_bound(args) -> str:
    s = load_scenario(args.file)
    value, witness = classical_bound(s)
    out = {
        "scenario": s.name,
        "direction": s.inequality.direction,
        "classical_bound": canonical_number(value),
        "witness": {k: canonical_number(v) for k, v in witness.assignment.items()},
    }
    return json.dumps(out, sort_keys=True, separators=(",", ":")) + "\n"


def _cmd_fine(args) -> str:
    s = load_scenario(args.file)
    moments = {}
    for term, value in zip(s.inequality.terms, term_values(s)):
        moments.setdefault(term.names, value)
    labels = {n: outcome_values(o) for n, o in s.observables.items()}
    result = joint_distribution_feasible(labels, list(moments.items()))
    out = {
        "scenario": s.name,
        "quantum_value": canonical_number(quantum_value(s)),
        "lp_verdict": "FEASIBLE" if result.feasible else "INFEASIBLE",
        "moments": [{"names": list(k), "value": canonical_number(v)} for k, v in moments.items()],
    }
    if result.feasible:
        out["witness"] = [
            {"assignment": {k: canonical_number(v) for k, v in atom.items()}, "probability": canonical_number(p)}
            for atom, p in result.distribution.support()
        ]
    return json.dumps(out, sort_keys=True, separators=(",", ":")) + "\n"


def _cmd_sweep(args) -> str:
    if args.steps < 1:
        raise DocumentError("--steps", "must be at least 1")
    if not (np.isfinite(args.start) and np.isfinite(args.stop)):
        raise DocumentError("--from/--to", "must be finite")
    lines = ["theta,K"]
    for theta in np.linspace(args.start, args.stop, args.steps):
        k = quantum_value(leggett_garg_scenario(float(theta)))
        lines.append(f"{format_number(canonical_number(theta))},{format_number(canonical_number(k))}")
    return "\n".join(lines) + "\n"


def _cmd_export(args) -> str:
    return dump_scenario(BUILTIN[args.name]())


COMMANDS = {
    "run": _cmd_run,
    "demo": _cmd_demo,
    "bound": _cmd_bound,
    "fine": _cmd_fine,
    "sweep": _cmd_sweep,
    "export": _cmd_export,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnknownDemo as exc:
        print(f"error: unknown demo {exc.args[0]!r}; choose from {', '.join(DEMOS)}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (TensionLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
