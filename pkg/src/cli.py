"""CLI entry point for absim."""

from __future__ import annotations

import argparse
import asyncio
import dataclasses
import json
import sys
from typing import Any

from .errors import AbsimError, ConfigError, ZeroPostselection
from .logging_config import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_ZERO_POSTSELECTION = 3


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _pi_float(text: str) -> float:
    from .config import parse_float

    try:
        return parse_float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="absim",
        description="Pre- and postselected weak-measurement simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-json", action="store_true", help="Log JSON lines to stderr")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (default: INFO)")
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    # Run command
    run_parser = subparsers.add_parser("run", help="Run a scenario file and emit a JSON report")
    run_parser.add_argument("config_file", help="key = value scenario file (or .yaml)")
    run_parser.add_argument("--seed", type=int, help="Override the seed (unsigned 64-bit)")
    run_parser.add_argument("--trials", type=int, help="Override the number of trials")
    run_parser.add_argument("--workers", type=int, help="Parallel trial chunks (default: ABSIM_WORKERS or 1)")
    run_parser.add_argument("--out", help="Write the JSON report here instead of stdout")
    run_parser.add_argument("--save", action="store_true", help="Write the JSON report under ABSIM_DATA_DIR")
    run_parser.add_argument("--csv", help="Also write per-trial rows to this CSV file")
    run_parser.add_argument("--html", help="Also write an HTML summary to this file")
    run_parser.add_argument("--defaults", help="Defaults YAML file (default: config.yaml)")

    # Scaling command
    scaling_parser = subparsers.add_parser("scaling", help="No-flip survival versus ensemble size N")
    scaling_parser.add_argument("--g0", type=_pi_float, required=True, help="Coupling strength, |g0| <= 1")
    scaling_parser.add_argument("--n", type=_int_list, default=[16, 64, 256], help="Ascending N values (default: 16,64,256)")
    scaling_parser.add_argument("--trials", type=int, default=10000, help="Trials per N (default: 10000)")
    scaling_parser.add_argument("--seed", type=int, default=0, help="Seed (default: 0)")
    scaling_parser.add_argument("--out", help="Write the JSON table here instead of stdout")
    scaling_parser.add_argument("--html", help="Also write an HTML table to this file")

    # Check command
    subparsers.add_parser("check", help="Run the exact-identity suites")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(level=args.log_level, json_output=args.log_json)

    try:
        if args.command == "run":
            return asyncio.run(cmd_run(args))
        if args.command == "scaling":
            return cmd_scaling(args)
        if args.command == "check":
            return cmd_check(args)
    except ConfigError as e:
        logger.error("Configuration error: %s", e)
        return EXIT_CONFIG
    except ZeroPostselection as e:
        logger.error("%s", e)
        return EXIT_ZERO_POSTSELECTION
    except AbsimError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_FAILURE

    parser.print_help()
    return EXIT_FAILURE


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    from .simulation.models import write_atomic

    write_atomic(out, text)
    logger.info("Wrote %s", out)


async def cmd_run(args: argparse.Namespace) -> int:
    """Run one scenario file."""
    from .config import load_config, report_path, set_config_file
    from .simulation.models import ReportStore, write_trials_csv
    from .simulation.runner import execute

    if args.defaults:
        set_config_file(args.defaults)

    try:
        cfg = load_config(args.config_file)
    except OSError as e:
        logger.error("Cannot read %s: %s", args.config_file, e)
        return EXIT_CONFIG

    overrides: dict[str, Any] = {
        name: getattr(args, name) for name in ("seed", "trials", "workers") if getattr(args, name) is not None
    }
    cfg = dataclasses.replace(cfg, **overrides).validate()

    report, records = await execute(cfg)

    if args.save:
        path = report_path(cfg)
        ReportStore(path).save(report)
        logger.info("Report saved to %s", path)
    _emit(report.to_json(), args.out)

    if args.csv:
        write_trials_csv(records, args.csv)
        logger.info("Per-trial CSV written to: %s", args.csv)

    if args.html:
        from .generator import generate_html

        generate_html(report, args.html)
        logger.info("HTML output written to: %s", args.html)

    return EXIT_OK


def cmd_scaling(args: argparse.Namespace) -> int:
    """Tabulate no-flip survival for each N."""
    from .simulation.scaling import survival_scaling

    rows = survival_scaling(args.g0, args.n, args.trials, args.seed)
    table = {"g0": args.g0, "trials": args.trials, "seed": args.seed, "rows": [row.to_dict() for row in rows]}
    _emit(json.dumps(table, indent=2) + "\n", args.out)

    if args.html:
        from .generator import generate_scaling_html

        generate_scaling_html(rows, args.g0, args.html)
        logger.info("HTML output written to: %s", args.html)

    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    """Run every exact-identity suite; exit 1 on any violation."""
    from .simulation.checks import run_checks, summary

    result = summary(run_checks())
    sys.stdout.write(json.dumps(result, indent=2) + "\n")
    return EXIT_OK if result["passed"] else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
