"""Small cases shared by the test modules."""
from __future__ import annotations

import math
from dataclasses import replace

from gridvsla.grid.model import Branch, Bus, BusKind, Generator, GridCase, Snapshot
from gridvsla.io.snapshots import SnapshotSeries
from gridvsla.services.powerflow import solve
from gridvsla.services.stress import scale_case

# Closed-form high/low solutions of the two-bus case at 0.5 pu unity-pf load.
TWO_BUS_V_HIGH = complex(0.5 + math.sqrt(0.19), -0.1)
TWO_BUS_V_LOW = complex(0.5 - math.sqrt(0.19), -0.1)


def two_bus_case(p_load: float = 0.0, q_load: float = 0.0, *, r: float = 0.1, x: float = 0.2) -> GridCase:
    """Slack 1 at 1.0 pu feeding PQ bus 2 through r + jx; loads in per-unit."""
    return GridCase(
        base_mva=100.0,
        buses=(
            Bus(id=1, kind=BusKind.SLACK),
            Bus(id=2, kind=BusKind.PQ, p_load=p_load, q_load=q_load),
        ),
        branches=(Branch(from_bus=1, to_bus=2, r=r, x=x),),
        generators=(Generator(bus=1, v_setpoint=1.0),),
    )


def transformer_case() -> GridCase:
    """PQ bus 2 reached only through a lossless x = 0.1 branch (y = -j10)."""
    return GridCase(
        base_mva=100.0,
        buses=(Bus(id=1, kind=BusKind.SLACK), Bus(id=2, kind=BusKind.PQ)),
        branches=(Branch(from_bus=1, to_bus=2, r=0.0, x=0.1, is_transformer=True),),
        generators=(Generator(bus=1),),
    )


def star_case(spokes: int = 10, *, heavy: int | None = None, heavy_factor: float = 4.0) -> GridCase:
    """Slack 1 at the center, PQ spokes 2..spokes+1 on identical lines and loads."""
    buses = [Bus(id=1, kind=BusKind.SLACK)]
    branches = []
    for bus_id in range(2, spokes + 2):
        factor = heavy_factor if bus_id == heavy else 1.0
        buses.append(Bus(id=bus_id, kind=BusKind.PQ, p_load=0.3 * factor, q_load=0.1 * factor))
        branches.append(Branch(from_bus=1, to_bus=bus_id, r=0.02, x=0.1))
    return GridCase(
        base_mva=100.0,
        buses=tuple(buses),
        branches=tuple(branches),
        generators=(Generator(bus=1),),
    )


def flat_snapshot(case: GridCase, index: int = 0) -> Snapshot:
    return Snapshot(index=index, voltages={b: 1.0 + 0.0j for b in case.bus_ids})


def load_series(
    case: GridCase,
    lambdas: tuple[float, ...],
    *,
    scenario_id: str = "",
    with_injections: bool = True,
) -> SnapshotSeries:
    """Power-flow snapshots of `case` scaled by each multiplier, indexed and timed 0, 1, ..."""
    snapshots = []
    for index, lam in enumerate(lambdas):
        snapshot = replace(solve(scale_case(case, lam)), index=index, time=float(index))
        if not with_injections:
            snapshot = replace(snapshot, injections=None)
        snapshots.append(snapshot)
    return SnapshotSeries(case_ref="", snapshots=tuple(snapshots), scenario_id=scenario_id)
