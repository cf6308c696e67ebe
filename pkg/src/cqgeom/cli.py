"""Command-line interface: run scenario checks and emit reports.

Exit codes: 0 all checks pass; 1 at least one check failed; 2 usage,
parse, or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .checks import CHECKS, run_checks
from .scenario import ScenarioError, load_scenario

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqgeom",
        description="Verify biquaternion frame-free geometry scenarios.",
    )
    parser.add_argument("--version", action="version",
                        version=f"cqgeom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run checks from a scenario file")
    run.add_argument("--scenario", required=True, help="scenario file (.scn)")
    run.add_argument("--json", metavar="OUT", help="write a JSON report here")
    run.add_argument("--seed", type=int, help="override the sampling seed")
    run.add_argument("--points", type=int, help="override the random point count")
    run.add_argument("--fd-step", type=float, help="override the FD step")
    run.add_argument("--fd-order", type=int, choices=(2, 4),
                     help="override the FD order")
    run.add_argument("--tol", type=float,
                     help="blanket tolerance for all checks")
    run.add_argument("--checks", help="comma-separated check names")

    sub.add_parser("list-checks", help="list available checks")

    val = sub.add_parser("validate", help="load and validate a scenario only")
    val.add_argument("--scenario", required=True, help="scenario file (.scn)")
    return parser


def _cmd_run(args) -> int:
    checks = tuple(c for c in args.checks.split(",") if c) if args.checks else None
    try:
        scenario = load_scenario(
            args.scenario, seed=args.seed, count=args.points,
            fd_step=args.fd_step, fd_order=args.fd_order, tol=args.tol,
            checks=checks,
        )
        report = run_checks(scenario)
    except (ScenarioError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.to_text())
    if args.json:
        try:
            with open(args.json, "w") as fh:
                json.dump(report.to_json(), fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            print(f"error: cannot write {args.json}: {exc}", file=sys.stderr)
            return 2
    return 0 if report.failed == 0 else 1


def _cmd_list_checks() -> int:
    width = max(len(name) for name in CHECKS)
    for name, check in CHECKS.items():
        needs = f"  [needs {check.requires}]" if check.requires else ""
        print(f"{name:<{width}}  tol {check.default_tol:.0e}  "
              f"{check.description}{needs}")
    return 0


def _cmd_validate(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    echo = scenario.echo()
    print(f"ok: {args.scenario} ({echo['points']} points, "
          f"fd order {echo['fd_order']})")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "list-checks":
        return _cmd_list_checks()
    return _cmd_validate(args)


if __name__ == "__main__":
    sys.exit(main())
