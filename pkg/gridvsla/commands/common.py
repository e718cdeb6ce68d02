from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from gridvsla.config.runtime import get_config

logger = logging.getLogger(__name__)


def write_text(text: str, path: Path | None) -> None:
    """Writes to `path` (LF line endings, UTF-8) or to standard output."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info("[output] wrote %s", path)


def add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="Report file (default: standard output).")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def add_solver_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=get_config("PF_TOLERANCE"))
    parser.add_argument("--max-iter", type=int, default=get_config("PF_MAX_ITER"))
    parser.add_argument(
        "--enforce-q-limits",
        action="store_true",
        default=bool(get_config("ENFORCE_Q_LIMITS")),
        help="Switch PV buses to PQ when generator reactive limits bind.",
    )


def add_bus_filter(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--buses",
        help="Comma-separated bus ids of interest (default: every PQ bus).",
    )
