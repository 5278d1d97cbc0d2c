"""
Casimir verifier: command-line entry point.

Dependency check runs only when started as a script (python app.py).
Configuration is centralized in src.config. Optional .env is loaded if present.
"""

import sys
import os

# 1. Run absolute first: ensure all required packages from requirements.txt are installed
if __name__ == "__main__":
    sys.path.append(os.path.dirname(os.path.abspath(__file__)))
    try:
        from src.dependency_manager import check_and_install_dependencies
        check_and_install_dependencies()
    except Exception as e:
        print(f"Error during dependency check: {e}")


# Load .env from project root so CASIMIR_TOL, CASIMIR_SEED, etc. apply
try:
    from dotenv import load_dotenv
    load_dotenv(os.path.join(os.path.dirname(os.path.abspath(__file__)), ".env"))
except ImportError:
    pass
import argparse
import json
import logging

from src.config import SUITES, get_verify_defaults
from src.goldens import dump_goldens, render
from src.pipeline import SUITE_DESCRIPTIONS, UnknownSuiteError, run_suites
from src.quadrature import INTEGRANDS, QuadratureConfig, oracle
from src.rep_tables import tables_payload
from src.reports import (
    ReportSchemaError,
    format_summary,
    report_exit_code,
    validate_report,
    write_report,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def build_parser():
    defaults = get_verify_defaults()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="debug logging")
    parser = argparse.ArgumentParser(prog="app.py", description="Exact verification of genus-2 Casimir and Sturm computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("suite", nargs="?", help=f"one of {', '.join(SUITES)} or all")
    verify.add_argument("--suite", dest="suite_option", help="alias of the positional suite")
    verify.add_argument("--list", action="store_true", help="list suites and exit")
    verify.add_argument("--json", dest="json_path", help="write the JSON report here")
    verify.add_argument("--tol", type=float, default=defaults["tol"], help="relative tolerance of numeric checks")
    verify.add_argument("--seed", type=int, default=defaults["seed"], help="seed of randomized checks")
    verify.add_argument("--jobs", type=int, default=defaults["jobs"], help="suites run in parallel")
    verify.add_argument("--k", type=int, nargs="+", default=defaults["k"], help="weights for the Sturm limits")
    verify.add_argument("--golden-dir", default=defaults["golden_dir"], help="directory of golden files")
    verify.add_argument("--timings", action="store_true", default=defaults["timings"], help="record elapsedMs")

    dump = sub.add_parser("dump", parents=[common], help="write golden files or the representation tables")
    dump.add_argument("kind", choices=("goldens", "tables"))
    dump.add_argument("--path", required=True, help="output directory")
    dump.add_argument("--update-goldens", action="store_true", help="required to regenerate goldens")

    orc = sub.add_parser("oracle", parents=[common], help="cone quadrature next to the symbolic Gamma integral")
    orc.add_argument("--integrand", choices=INTEGRANDS, required=True)
    orc.add_argument("--s", type=float, required=True)
    orc.add_argument("--t11", type=float, default=1.0)
    orc.add_argument("--t12", type=float, default=0.0)
    orc.add_argument("--t22", type=float, default=1.0)
    orc.add_argument("--tol", type=float, default=defaults["tol"])
    return parser


def cmd_verify(args):
    if args.list:
        for name in SUITES:
            print(f"{name:<14} {SUITE_DESCRIPTIONS[name]}")
        return EXIT_OK
    if args.suite and args.suite_option and args.suite != args.suite_option:
        print(f"Conflicting suites: {args.suite} vs --suite {args.suite_option}", file=sys.stderr)
        return EXIT_USAGE
    suite = args.suite or args.suite_option
    if not suite:
        print("No suite given; use --list to see the choices.", file=sys.stderr)
        return EXIT_USAGE
    if args.jobs < 1 or args.tol <= 0:
        print("--jobs must be >= 1 and --tol must be positive.", file=sys.stderr)
        return EXIT_USAGE

    options = {
        "tol": args.tol,
        "seed": args.seed,
        "jobs": args.jobs,
        "k": args.k,
        "golden_dir": args.golden_dir,
        "timings": args.timings,
    }
    try:
        report = run_suites(suite, options)
    except UnknownSuiteError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE

    try:
        validate_report(report)
    except ReportSchemaError as e:
        print(str(e), file=sys.stderr)
        return EXIT_FAIL

    if args.json_path:
        try:
            write_report(report, args.json_path)
        except OSError as e:
            print(str(e), file=sys.stderr)
            return EXIT_FAIL
    print(format_summary(report))
    return report_exit_code(report)


def cmd_dump(args):
    try:
        if args.kind == "goldens":
            if not args.update_goldens:
                print("Refusing to overwrite goldens without --update-goldens.", file=sys.stderr)
                return EXIT_USAGE
            for path in dump_goldens(args.path):
                print(path)
            return EXIT_OK
        os.makedirs(args.path, exist_ok=True)
        target = os.path.join(args.path, "tables.json")
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(render(tables_payload()))
        print(target)
        return EXIT_OK
    except OSError as e:
        print(str(e), file=sys.stderr)
        return EXIT_FAIL


def cmd_oracle(args):
    try:
        cfg = QuadratureConfig(tol=args.tol, t=(args.t11, args.t12, args.t22))
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    if args.s <= 0.5:
        print(f"--s {args.s} is outside the convergence range s > 1/2", file=sys.stderr)
        return EXIT_USAGE
    result = oracle(args.integrand, args.s, cfg)
    print(json.dumps(result, indent=2, sort_keys=True))
    return EXIT_OK if result["agree"] else EXIT_FAIL


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    commands = {"verify": cmd_verify, "dump": cmd_dump, "oracle": cmd_oracle}
    return commands[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
