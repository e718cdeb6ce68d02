from __future__ import annotations

import argparse
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from gridvsla.commands.common import add_bus_filter, add_output_options, write_text
from gridvsla.config.runtime import RunConfig, get_config
from gridvsla.core.errors import InputError, UsageError
from gridvsla.grid.ybus import build_ybus
from gridvsla.io import expand_snapshot_paths, load_case, read_snapshot_file
from gridvsla.io.reports import emit_histogram_tsv, emit_report_csv, emit_report_json
from gridvsla.services.vsla import (
    SCOPE_ALL,
    SCOPE_FILTERED,
    ScenarioReport,
    aggregate_scenarios,
    analyze_series,
    buses_of_interest,
    histogram,
    no_load_table,
    z_score_histogram,
)

logger = logging.getLogger(__name__)


def cmd_vsla(config: RunConfig) -> int:
    case = load_case(config.case_path)
    y = build_ybus(case)
    buses = buses_of_interest(case, config.bus_filter)
    scope = SCOPE_ALL if config.bus_filter is None else SCOPE_FILTERED
    no_load = no_load_table(y, buses)

    paths = expand_snapshot_paths(list(config.snapshots_paths))
    if not paths:
        raise InputError("no snapshot CSV files found")
    stems = [p.stem for p in paths]
    if len(set(stems)) != len(stems):
        raise UsageError("snapshot files must have distinct names (the stem is the scenario id)")

    def analyze(path: Path) -> ScenarioReport:
        series = read_snapshot_file(path, case, case_ref=str(config.case_path))
        return analyze_series(
            y,
            series,
            buses,
            threshold=config.z_threshold,
            sample_std=config.sample_std,
            scope=scope,
            no_load_cache=no_load,
        )

    logger.info(
        "[vsla] %d scenarios, %d buses of interest, %d workers", len(paths), len(buses), config.jobs
    )
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(analyze, paths))
    else:
        reports = [analyze(path) for path in paths]
    reports.sort(key=lambda r: r.scenario_id)
    aggregate = aggregate_scenarios(reports)

    if config.format == "csv":
        text = emit_report_csv(reports, aggregate)
    else:
        text = emit_report_json(reports, aggregate)
    write_text(text, config.output_path)

    criticals = [value for value, _ in aggregate.per_bus_critical.values()]
    if config.histogram_path is not None:
        write_text(emit_histogram_tsv(histogram(criticals, config.bins)), config.histogram_path)
    if config.z_histogram_path is not None:
        rows = z_score_histogram(aggregate.z_scores, config.bins)
        write_text(emit_histogram_tsv(rows), config.z_histogram_path)

    logger.info(
        "[vsla] system critical %.6g at bus %d (%s buses); critical set %s",
        aggregate.system_critical,
        aggregate.critical_location,
        aggregate.scope,
        sorted(aggregate.critical_set) or "empty",
    )
    return 0


def setup_vsla(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "vsla",
        help="Critical LCI per bus over snapshot scenarios, z-score selection and statistics.",
    )
    parser.add_argument("--case", required=True, help="Case file (.m MATPOWER or .json native).")
    parser.add_argument(
        "--snapshots",
        action="append",
        required=True,
        help="Snapshot CSV or directory of CSVs; repeat for more scenarios.",
    )
    add_bus_filter(parser)
    parser.add_argument("--zmin", type=float, default=get_config("Z_THRESHOLD"))
    parser.add_argument(
        "--sample-std",
        action="store_true",
        default=bool(get_config("SAMPLE_STD")),
        help="Use the 1/(N-1) standard deviation for z-scores.",
    )
    parser.add_argument("--jobs", type=int, default=get_config("JOBS"))
    parser.add_argument("--histogram", help="TSV histogram of per-bus critical LCI.")
    parser.add_argument("--z-histogram", help="TSV histogram of per-bus z-scores.")
    parser.add_argument("--bins", type=int, default=get_config("HISTOGRAM_BINS"))
    add_output_options(parser)
    parser.set_defaults(handler=cmd_vsla)
