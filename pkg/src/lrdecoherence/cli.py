"""
Command-line front end.

    lrdecoherence run <config> [--step DT]
    lrdecoherence verify <config> [--step DT]
    lrdecoherence scan-j <config> [--delta RAD] [--jmax J] [--step DT]

``<config>`` is a scenario file or the name of a bundled scenario. Exit codes:
0 success, 2 invalid configuration, 3 failed numerical check. The output
directory can be overridden with the LRDECOHERENCE_OUTPUT_DIR environment
variable.
"""

import argparse
import os
import sys

from .errors import ScenarioError
from .pipeline import EXIT_CONFIG, execute, scan_j
from .scenario import load_scenario, parse_number

BUNDLED_DIR = os.path.join(os.path.dirname(__file__), "scenarios")


def bundled_scenarios():
    return sorted(f[:-4] for f in os.listdir(BUNDLED_DIR) if f.endswith(".ini"))


def resolve_config(name):
    if os.path.isfile(name):
        return name
    candidate = os.path.join(BUNDLED_DIR, name if name.endswith(".ini") else name + ".ini")
    if os.path.isfile(candidate):
        return candidate
    return name


def _number_arg(text):
    try:
        return parse_number(text, "argument")
    except ScenarioError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = argparse.ArgumentParser(prog="lrdecoherence", description="Invariant-based decoherence simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("run", "run pipelines and emit CSV series"), ("verify", "run the cross-route verification suite")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("config", help="scenario file or bundled scenario name")
        sp.add_argument("--step", type=_number_arg, help="override the scenario time step")
    sp = sub.add_parser("scan-j", help="classical-limit scan of |F| against detector spin j")
    sp.add_argument("config")
    sp.add_argument("--delta", type=_number_arg, help="angle difference theta_i - theta_j (rad)")
    sp.add_argument("--jmax", type=_number_arg, help="largest spin in the scan")
    sp.add_argument("--step", type=_number_arg, help="accepted for symmetry; the scan has no time grid")
    sub.add_parser("list", help="list bundled scenarios")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "list":
        print("\n".join(bundled_scenarios()))
        return 0
    try:
        scn = load_scenario(resolve_config(args.config))
        if args.step is not None and not args.step > 0:
            raise ScenarioError("--step", "must be positive")
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "scan-j":
            code, report, scan = scan_j(scn, args.delta, args.jmax)
            print(f"scan.csv: {len(scan.j)} rows in {scn.output}")
        else:
            code, report = execute(scn, args.command, args.step)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for line in report.lines():
        print(line)
    print(f"{'PASS' if report.passed else 'FAIL'}: {scn.name} ({args.command})")
    return code


if __name__ == "__main__":
    sys.exit(main())
