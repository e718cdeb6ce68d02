from __future__ import annotations

import argparse
import logging

from gridvsla.commands.common import (
    add_bus_filter,
    add_output_options,
    add_solver_options,
    write_text,
)
from gridvsla.config.runtime import RunConfig, get_config
from gridvsla.io import load_case
from gridvsla.io.reports import emit_sweep_csv, emit_sweep_json
from gridvsla.services.jacobian import jacobian, jacobian_eigenvalues
from gridvsla.services.powerflow import SolveOptions
from gridvsla.services.stress import critical_bus, scale_case, stress_sweep, sweep_lci_table
from gridvsla.services.vsla import buses_of_interest

logger = logging.getLogger(__name__)


def cmd_sweep(config: RunConfig) -> int:
    case = load_case(config.case_path)
    buses = buses_of_interest(case, config.bus_filter)
    opts = SolveOptions(
        tol=config.tol,
        max_iter=config.max_iter,
        enforce_q_limits=config.enforce_q_limits,
    )
    sweep = stress_sweep(
        case, config.lambda_start, config.step, config.min_step, opts, lambda_max=config.lambda_max
    )
    rows = sweep_lci_table(case, sweep, buses, with_jacobian=config.jacobian)

    if config.format == "csv":
        text = emit_sweep_csv(rows, pv_trace=config.pv_trace)
    else:
        eigenvalues = None
        if config.jacobian:
            jac = jacobian(scale_case(case, sweep.lambda_max), sweep.last)
            eigenvalues = jacobian_eigenvalues(jac)
        text = emit_sweep_json(
            rows, sweep.lambda_max, pv_trace=config.pv_trace, eigenvalues=eigenvalues
        )
    write_text(text, config.output_path)

    bus_id, value = critical_bus(rows[-1])
    logger.info(
        "[sweep] lambda_max=%.6g (%.1f MW), critical bus %d with LCI %.6g",
        sweep.lambda_max,
        rows[-1].total_load_mw,
        bus_id,
        value,
    )
    return 0


def setup_sweep(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "sweep",
        help="Scale load and generation until the power flow fails; tabulate LCI per step.",
    )
    parser.add_argument("--case", required=True, help="Case file (.m MATPOWER or .json native).")
    add_bus_filter(parser)
    parser.add_argument("--lambda-start", type=float, default=get_config("LAMBDA_START"))
    parser.add_argument("--step", type=float, default=get_config("LAMBDA_STEP"))
    parser.add_argument("--min-step", type=float, default=get_config("LAMBDA_MIN_STEP"))
    parser.add_argument("--lambda-max", type=float, default=get_config("LAMBDA_MAX"))
    add_solver_options(parser)
    add_output_options(parser)
    parser.add_argument(
        "--jacobian",
        action="store_true",
        help="Add the smallest Jacobian singular value per step (and, in JSON, the eigenvalue real parts at the last point).",
    )
    parser.add_argument(
        "--pv-trace",
        action="store_true",
        help="Add high/low solution voltage magnitudes per bus (PV-curve halves).",
    )
    parser.set_defaults(handler=cmd_sweep)
