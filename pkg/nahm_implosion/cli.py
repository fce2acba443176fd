"""Command-line front end: ``nahm-lab run`` and ``nahm-lab acceptance``."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from nahm_implosion import __version__
from nahm_implosion.config import LabSettings
from nahm_implosion.exceptions import ImplosionLabError, ScenarioError
from nahm_implosion.harness import Laboratory, Report, run_scenario, write_report

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nahm-lab",
        description="Numerical checks for Nahm data, Bielawski metrics and implosion strata.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    overrides = argparse.ArgumentParser(add_help=False)
    overrides.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
    overrides.add_argument(
        "--grid-nodes", type=int, default=None, help="Override the number of grid nodes"
    )
    overrides.add_argument(
        "--tmax", type=float, default=None, help="Override the half-line truncation time"
    )
    overrides.add_argument(
        "--log-level", choices=LOG_LEVELS, default="WARNING", help="Log level (default: WARNING)"
    )

    run = sub.add_parser("run", parents=[overrides], help="Run one scenario file")
    run.add_argument("scenario", type=Path, help="Scenario JSON file")
    run.add_argument("--out", type=Path, required=True, help="Output directory")

    acceptance = sub.add_parser(
        "acceptance", parents=[overrides], help="Run the acceptance checks"
    )
    acceptance.add_argument(
        "--filter", default=None, help="Only run checks whose name contains this text"
    )
    acceptance.add_argument("--out", type=Path, default=None, help="Optional output directory")
    return parser


def _settings(args: argparse.Namespace) -> LabSettings:
    try:
        return LabSettings(grid_nodes=args.grid_nodes, t_max=args.tmax, seed=args.seed)
    except ValidationError as e:
        raise ScenarioError(
            "Invalid command-line overrides",
            errors=[{"loc": list(error["loc"]), "msg": error["msg"]} for error in e.errors()],
        ) from e


def _summarize(report: Report) -> None:
    failed = [key for key, ok in sorted(report.status.items()) if not ok]
    outcome = "pass" if report.passed else "fail"
    print(f"{report.scenario.name}: {outcome} ({len(report.status) - len(failed)}/{len(report.status)} assertions)")
    for key in failed:
        print(f"  failed: {key}")
    for artifact in sorted(report.artifacts):
        print(f"  wrote: {artifact}")


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point.

    Returns:
        0 when every assertion passes, 1 on assertion failure, otherwise the
        ``exit_code`` of the raised laboratory error (2 for scenario errors,
        3 for integration blow-up)
    """
    args = build_parser().parse_args(argv)
    try:
        settings = _settings(args)
        with Laboratory(settings=settings, log_level=args.log_level) as lab:
            if args.command == "run":
                report = run_scenario(args.scenario, args.out, lab=lab)
            else:
                report = lab.acceptance(args.filter)
                if args.out is not None:
                    write_report(report, args.out)
    except ImplosionLabError as e:
        print(f"error: {e.message}", file=sys.stderr)
        for error in e.details.get("errors", []):
            print(f"  {'.'.join(str(part) for part in error['loc'])}: {error['msg']}", file=sys.stderr)
        diagnostics = {key: value for key, value in e.details.items() if key != "errors"}
        if diagnostics:
            print(f"  details: {diagnostics}", file=sys.stderr)
        return e.exit_code
    _summarize(report)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
