"""Command-line driver: run / validate / examples.

Exit codes: 0 success, 1 any task failure (or report write failure),
2 spec error.  SEMIFRAME_TOL overrides the default tolerance; the --tol
flag wins over the environment.
"""

import argparse
import json
import os
import sys

from ..errors import IoError, ParseError, SemiframeError, ValidationError
from . import experiment
from .fixtures import EXAMPLE_SPECS


def build_parser():
    parser = argparse.ArgumentParser(
        prog="semiframes",
        description="Finite-section diagnostics for frames and semi-frames",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment spec")
    p_run.add_argument("--spec", required=True, help="path to the JSON spec")
    p_run.add_argument("--out", required=True, help="output directory for the report")
    p_run.add_argument("--tol", type=float, default=None,
                       help="default tolerance (default 1e-9; SEMIFRAME_TOL overrides)")
    p_run.add_argument("--seed", type=int, default=None,
                       help="probe seed; overrides the spec's seed")

    p_val = sub.add_parser("validate", help="validate a spec without running it")
    p_val.add_argument("--spec", required=True, help="path to the JSON spec")

    p_ex = sub.add_parser("examples", help="write the shipped example specs")
    p_ex.add_argument("--out", default="specs", help="directory for the spec files")
    return parser


def _effective_tolerance(flag_value):
    if flag_value is not None:
        return float(flag_value)
    env = os.environ.get("SEMIFRAME_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError:
            print(f"warning: ignoring malformed SEMIFRAME_TOL={env!r}", file=sys.stderr)
    return experiment.DEFAULT_TOL


def _load_spec(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ParseError(f"cannot read spec {path}: {err}")
    return experiment.parse_spec(text)


def main(argv=None):
    args = build_parser().parse_args(argv)

    if args.command == "validate":
        try:
            _load_spec(args.spec)
        except (ParseError, ValidationError) as err:
            print(f"invalid spec: {err}", file=sys.stderr)
            return 2
        print("spec is valid")
        return 0

    if args.command == "examples":
        try:
            os.makedirs(args.out, exist_ok=True)
            for name, spec in EXAMPLE_SPECS.items():
                path = os.path.join(args.out, name)
                with open(path, "w", encoding="utf-8") as fh:
                    json.dump(spec, fh, indent=2, sort_keys=True)
                    fh.write("\n")
                print(path)
        except OSError as err:
            print(f"cannot write example specs: {err}", file=sys.stderr)
            return 1
        return 0

    # run
    try:
        spec = _load_spec(args.spec)
    except (ParseError, ValidationError) as err:
        print(f"invalid spec: {err}", file=sys.stderr)
        return 2
    tolerance = _effective_tolerance(args.tol)
    try:
        report = experiment.run(spec, tolerance=tolerance, seed=args.seed)
        experiment.emit(report, args.out)
    except IoError as err:
        print(f"report write failed: {err}", file=sys.stderr)
        return 1
    except SemiframeError as err:
        print(f"run failed: {err}", file=sys.stderr)
        return 1
    failures = [t for t in report["tasks"] if t["status"] != "ok"]
    for failure in failures:
        err = failure["error"]
        print(
            f"task {failure['index']} ({failure['task']}) failed: "
            f"{err['type']}: {err['message']}",
            file=sys.stderr,
        )
    print(os.path.join(args.out, "report.json"))
    return 1 if failures else 0


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
