"""Command-line interface.

    heritagecrime SUBCOMMAND [--config PATH] [--out DIR] [--seed N]
                             [--format json|csv] [--no-figures]

Subcommands: funnel, tev, market, simulate, scenario, calibrate, all.
Every run writes report.json, CSV tables, and (unless disabled) PNG
figures to the output directory; --format selects what is echoed to
stdout.  Exit codes: 0 success, 1 validation error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

from . import __version__
from .config import config_help_text, resolve_config
from .errors import NoCrossingError, ToolkitError
from .report import SUBCOMMANDS, run

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVER = 2

_SUBCOMMAND_HELP = {
    "funnel": "stage rates, detection risks, and registration coverage",
    "tev": "total economic value chain (direct, additional, non-use)",
    "market": "supply curve, equilibrium, and imprisonment comparative statics",
    "simulate": "agent-based population simulation and enforcement sweep",
    "scenario": "three-alternative opportunity-cost comparison",
    "calibrate": "fit the detection-risk rubric to target risks",
    "all": "run every section into one report",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heritagecrime",
        description="Economic model of crimes against cultural-historical "
                    "and archaeological heritage.",
        epilog=config_help_text(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version",
                        version=f"heritagecrime {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sub = subparsers.add_parser(
            name, help=_SUBCOMMAND_HELP[name],
            description=_SUBCOMMAND_HELP[name],
            epilog=config_help_text(),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        sub.add_argument("--config", metavar="PATH", default=None,
                         help="key=value config file (defaults apply when omitted)")
        sub.add_argument("--out", metavar="DIR", default=None,
                         help="output directory (overrides config key out_dir)")
        sub.add_argument("--seed", metavar="N", type=int, default=None,
                         help="simulation seed (overrides config key seed)")
        sub.add_argument("--format", choices=("json", "csv"), default="json",
                         help="stdout rendering of the report (files are "
                              "always written)")
        sub.add_argument("--no-figures", action="store_true",
                         help="skip figure rendering")
    return parser


def _error_payload(exc: ToolkitError) -> str:
    return json.dumps({"error": {"code": exc.code, "message": exc.message}})


def _print_csv_summary(report: dict) -> None:
    import csv as _csv

    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(["section", "key", "value"])
    for section, payload in report["sections"].items():
        for key, value in _flatten(payload):
            writer.writerow([section, key, value])
    sys.stdout.write(buf.getvalue())


def _flatten(payload, prefix=""):
    if isinstance(payload, dict):
        for k, v in payload.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(payload, list):
        for i, v in enumerate(payload):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), payload


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which would collide with the
        # solver-failure code; usage problems are validation errors here
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION

    overrides: dict[str, str] = {}
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    if args.no_figures:
        overrides["figures"] = "false"

    try:
        cfg = resolve_config(args.config, overrides)
        report = run(args.subcommand, cfg)
    except NoCrossingError as exc:
        print(_error_payload(exc), file=sys.stderr)
        return EXIT_SOLVER
    except ToolkitError as exc:
        print(_error_payload(exc), file=sys.stderr)
        return EXIT_VALIDATION

    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        _print_csv_summary(report)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
