"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 solver non-convergence, 3 property
check failure.
"""
import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, scenarios
from .circuit import is_classical
from .dctc import ConvergenceError, NotClassicalError, channel_for, classical_enumerate, fixed_point_space
from .dsl import ParseError, emit_reports, matrix_to_json, parse_circuit
from .checks import run_property_suite
from .pctc import ParadoxicalInputError

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_CHECK = 0, 1, 2, 3


class InputError(Exception):
    pass


def load_circuit(target: str):
    if target in scenarios.SCENARIOS:
        return scenarios.get(target).circuit()
    path = Path(target)
    if not path.is_file():
        raise InputError(
            f"{target!r} is neither a built-in scenario ({', '.join(sorted(scenarios.SCENARIOS))}) "
            "nor a readable file"
        )
    return parse_circuit(path.read_text(encoding="utf-8"))


def _fmt_matrix(m, indent="    ") -> str:
    m = np.asarray(m)
    real = np.max(np.abs(m.imag)) < 5e-13
    rows = []
    for row in m:
        if real:
            rows.append(" ".join(f"{z.real:8.5f}" for z in row))
        else:
            rows.append(" ".join(f"{z.real:8.5f}{z.imag:+.5f}j" for z in row))
    return "\n".join(indent + r for r in rows)


def _describe_state(m) -> str:
    label = analysis.basis_label(m)
    return f"|{label}><{label}|" if label is not None else "mixed/superposed"


def _print_report(r, out):
    print(f"[{r.model}] policy={r.policy} circuit={r.circuit_hash}", file=out)
    if r.rho_ctc is not None:
        print(f"  rho_ctc ({_describe_state(r.rho_ctc)}), residual {r.residual:.3g}:", file=out)
        print(_fmt_matrix(r.rho_ctc), file=out)
        print(f"  fixed-point set affine dimension: {r.fixed_space_dim}", file=out)
    print(f"  rho_out ({_describe_state(r.rho_out)}):", file=out)
    print(_fmt_matrix(r.rho_out), file=out)
    if r.extreme_points is not None:
        print(f"  extreme fixed points ({len(r.extreme_points)}):", file=out)
        for k, (e, o) in enumerate(r.extreme_points):
            print(f"   #{k}: rho_ctc {_describe_state(e)} -> rho_out {_describe_state(o)}", file=out)
    for name, value in r.diagnostics:
        shown = f"{value:.6g}" if isinstance(value, float) else value
        print(f"  {name}: {shown}", file=out)
    print(f"  closed information path: {r.closed_information_path}", file=out)


def cmd_solve(args, out) -> int:
    c = load_circuit(args.target)
    reports = analysis.solve(c, args.model, args.policy, args.tol)
    for r in reports:
        if r.model == "pctc" and r.diagnostic("paradoxical_input_annihilated"):
            print("warning: P-CTC branch: paradoxical input annihilated (post-selection weight 0)",
                  file=sys.stderr)
    if args.json:
        print(emit_reports(reports), file=out)
    else:
        for r in reports:
            _print_report(r, out)
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    c = load_circuit(args.target)
    ch = channel_for(c)
    fps = fixed_point_space(ch)
    table = None
    if is_classical(c):
        try:
            table = classical_enumerate(c)
        except NotClassicalError:
            table = None
    if args.json:
        obj = {
            "affine_dim": fps.affine_dim,
            "particular": matrix_to_json(fps.particular),
            "extreme_points": None
            if fps.extreme_points is None
            else [matrix_to_json(e) for e in fps.extreme_points],
            "classical": None
            if table is None
            else [{"z": r.z, "consistent": r.consistent, "output": r.output} for r in table],
        }
        print(json.dumps(obj, sort_keys=True, separators=(",", ": ")), file=out)
        return EXIT_OK
    print(f"fixed-point set: affine dimension {fps.affine_dim}", file=out)
    print("  particular (interior) fixed point:", file=out)
    print(_fmt_matrix(fps.particular), file=out)
    if fps.extreme_points is None:
        print("  extreme points: continuum (not enumerated)", file=out)
    else:
        for k, e in enumerate(fps.extreme_points):
            print(f"  extreme #{k}: {_describe_state(e)}", file=out)
            print(_fmt_matrix(e), file=out)
    if table is None:
        print("classical table: n/a (circuit or input is not classical)", file=out)
    else:
        print("classical table:", file=out)
        print("  z   consistent  output", file=out)
        for row in table:
            print(f"  {row.z:<3} {str(row.consistent):<11} {row.output}", file=out)
        if not any(r.consistent for r in table):
            print("  no consistent classical assignment", file=out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    results = run_property_suite(args.seed, args.count, corrupt=args.corrupt)
    failed = [r for r in results if not r.passed]
    worst = max((r.residual for r in results if np.isfinite(r.residual)), default=0.0)
    worst_agree = max((r.agreement for r in results if np.isfinite(r.agreement)), default=0.0)
    print(f"{len(results) - len(failed)}/{len(results)} fixed points found", file=out)
    print(f"max residual {worst:.3g}; max nullspace/orbit disagreement {worst_agree:.3g}", file=out)
    for r in failed:
        print(f"  FAIL instance {r.index} (d_cr={r.d_cr}, d_ctc={r.d_ctc}): {'; '.join(r.problems)}", file=out)
    return EXIT_CHECK if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ctcsim", description="Quantum circuits with closed timelike curves")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a circuit file or built-in scenario")
    s.add_argument("target", help="scenario name or circuit file")
    s.add_argument("--model", choices=["dctc", "pctc", "both"], default="both")
    s.add_argument("--policy", choices=list(analysis.DCTC_POLICIES), default="maxent")
    s.add_argument("--tol", type=float, default=1e-10, help="solver residual target")
    s.add_argument("--json", action="store_true", help="emit the structured report")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("enumerate", help="fixed-point set and classical consistency table")
    e.add_argument("target")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("check", help="randomized fixed-point property suite")
    c.add_argument("--seed", type=int, default=7)
    c.add_argument("--count", type=int, default=200)
    c.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    c.set_defaults(func=cmd_check)

    sub.add_parser("scenarios", help="list built-in scenarios").set_defaults(func=cmd_scenarios)
    return p


def cmd_scenarios(args, out) -> int:
    for name, sc in sorted(scenarios.SCENARIOS.items()):
        print(f"{name:<28} {sc.description}", file=out)
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (InputError, ParseError, ParadoxicalInputError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, analysis.ChannelDefect) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
