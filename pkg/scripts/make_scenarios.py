"""Writes synthetic snapshot scenarios for a case.

Every scenario ramps the system load from --lambda-start to --lambda-end while
each bus keeps its own random share of that ramp, then solves the power flow at
each step and writes the voltages (plus injections) as one snapshot CSV.

    python scripts/make_scenarios.py --scenarios 20 --out-dir data/scenarios
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from gridvsla.config.settings import IEEE30_CASE_PATH  # noqa: E402
from gridvsla.core.errors import NumericalError  # noqa: E402
from gridvsla.grid.model import GridCase  # noqa: E402
from gridvsla.io import SnapshotSeries, load_case, write_snapshot_csv  # noqa: E402
from gridvsla.services.powerflow import SolveOptions, run_power_flow  # noqa: E402

logger = logging.getLogger("gridvsla.scenarios")

DEFAULT_OUT_DIR = PROJECT_ROOT / "data" / "scenarios"


def perturbed_case(case: GridCase, lam: float, factors: dict[int, float]) -> GridCase:
    """Bus loads times `lam * factors[bus]`; generator P times `lam`."""
    return replace(
        case,
        buses=tuple(
            replace(
                b,
                p_load=b.p_load * lam * factors.get(b.id, 1.0),
                q_load=b.q_load * lam * factors.get(b.id, 1.0),
            )
            for b in case.buses
        ),
        generators=tuple(replace(g, p_gen=g.p_gen * lam) for g in case.generators),
    )


def make_scenario(
    case: GridCase,
    rng: np.random.Generator,
    *,
    lambdas: np.ndarray,
    spread: float,
    opts: SolveOptions,
    scenario_id: str,
) -> SnapshotSeries:
    factors = {b.id: float(1.0 + spread * rng.uniform(-1.0, 1.0)) for b in case.buses}
    snapshots = []
    previous = None
    for index, lam in enumerate(lambdas):
        try:
            result = run_power_flow(perturbed_case(case, float(lam), factors), opts, start=previous)
        except NumericalError as exc:
            logger.info("[scenarios] %s stops at lambda=%.4g: %s", scenario_id, lam, exc)
            break
        previous = replace(result.snapshot, index=index, time=float(index))
        snapshots.append(previous)
    return SnapshotSeries(case_ref="", snapshots=tuple(snapshots), scenario_id=scenario_id)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--case", default=os.getenv("SCENARIOS_CASE", str(IEEE30_CASE_PATH)))
    parser.add_argument("--out-dir", default=os.getenv("SCENARIOS_OUT_DIR", str(DEFAULT_OUT_DIR)))
    parser.add_argument("--scenarios", type=int, default=int(os.getenv("SCENARIOS_COUNT", "10")))
    parser.add_argument("--steps", type=int, default=int(os.getenv("SCENARIOS_STEPS", "12")))
    parser.add_argument("--lambda-start", type=float, default=1.0)
    parser.add_argument("--lambda-end", type=float, default=2.5)
    parser.add_argument("--spread", type=float, default=0.2, help="Per-bus load factor half-width.")
    parser.add_argument("--seed", type=int, default=int(os.getenv("SCENARIOS_SEED", "7")))
    return parser


def main() -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    args = build_parser().parse_args()
    if args.scenarios < 1 or args.steps < 1:
        logger.error("[scenarios] --scenarios and --steps must be >= 1")
        return 1
    if not 0.0 <= args.spread < 1.0:
        logger.error("[scenarios] --spread must be in [0, 1)")
        return 1

    case = load_case(args.case)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    lambdas = np.linspace(args.lambda_start, args.lambda_end, args.steps)
    opts = SolveOptions()

    for n in range(args.scenarios):
        scenario_id = f"scenario_{n:03d}"
        series = make_scenario(
            case, rng, lambdas=lambdas, spread=args.spread, opts=opts, scenario_id=scenario_id
        )
        if not len(series):
            logger.warning("[scenarios] %s has no converged snapshot, skipped", scenario_id)
            continue
        path = out_dir / f"{scenario_id}.csv"
        path.write_text(write_snapshot_csv(series), encoding="utf-8", newline="\n")
        logger.info("[scenarios] wrote %s (%d snapshots)", path, len(series))
    return 0


if __name__ == "__main__":
    sys.exit(main())
