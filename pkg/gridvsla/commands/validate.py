from __future__ import annotations

import argparse
import json
import logging

from gridvsla.commands.common import write_text
from gridvsla.config.runtime import RunConfig, get_all_configs
from gridvsla.grid.model import BusKind, GridCase
from gridvsla.grid.ybus import build_ybus, neighbor_view
from gridvsla.io import load_case

logger = logging.getLogger(__name__)


def case_issues(case: GridCase) -> list[str]:
    """Problems that parse cleanly but make the case unusable for power flow or LCI."""
    issues: list[str] = []
    y = build_ybus(case)
    for bus in case.buses:
        if not neighbor_view(y, bus.id).neighbors:
            issues.append(f"bus {bus.id} has no in-service branch")
    if not case.generators_at(case.slack_bus.id):
        logger.info("[validate] slack bus %d has no in-service generator", case.slack_bus.id)
    for bus in case.buses:
        if bus.kind is BusKind.PV and not case.generators_at(bus.id):
            logger.info("[validate] PV bus %d has no in-service generator, solved as PQ", bus.id)
    return issues


def cmd_validate(config: RunConfig) -> int:
    case = load_case(config.case_path)
    issues = case_issues(case)
    summary = {
        "case": str(config.case_path),
        "base_mva": case.base_mva,
        "buses": len(case.buses),
        "branches": len(case.branches),
        "branches_out_of_service": sum(1 for br in case.branches if not br.in_service),
        "generators": len(case.generators),
        "slack": case.slack_bus.id,
        "pq_buses": len(case.pq_bus_ids()),
        "issues": issues,
        "config": {row["name"]: row["value"] for row in get_all_configs()},
    }
    write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n", config.output_path)
    for issue in issues:
        logger.error("[validate] %s", issue)
    if issues:
        return 2
    logger.info("[validate] %s is clean", config.case_path)
    return 0


def setup_validate(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("validate", help="Parse a case, build its Y-bus, report problems.")
    parser.add_argument("--case", required=True, help="Case file (.m MATPOWER or .json native).")
    parser.add_argument("--out", help="Diagnostics file (default: standard output).")
    parser.set_defaults(handler=cmd_validate)
