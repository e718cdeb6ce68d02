"""Command-line entry point: argument parsing, logging setup and exit-code mapping."""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from gridvsla import __version__
from gridvsla.commands import setup_commands
from gridvsla.config.runtime import build_run_config, get_config
from gridvsla.core.errors import UsageError, VslaError

logger = logging.getLogger("gridvsla")

_LOG_FORMAT = "%(asctime)s %(levelname)s %(message)s"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="gridvsla",
        description="Voltage-stability location analysis with the Local Computation Index.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    setup_commands(subparsers)
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, str(get_config("LOG_LEVEL")), logging.INFO)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(_LOG_FORMAT))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)
    logging.captureWarnings(True)


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"gridvsla: {exc}", file=sys.stderr)
        return exc.exit_code
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(bool(args.verbose))
    try:
        config = build_run_config(args)
        return int(args.handler(config))
    except VslaError as exc:
        logger.error("[%s] %s: %s", args.command, type(exc).__name__, exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("[%s] %s", args.command, exc)
        return 2
    except Exception:
        logger.exception("[%s] internal error", args.command)
        return 4


def main() -> None:
    sys.exit(run())
