"""Snapshot time-series CSV: header `time,bus,vr,vi[,p,q]`, one row per bus per time."""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from gridvsla.config.settings import FLOAT_FORMAT
from gridvsla.core.errors import (
    EmptySeries,
    MissingBus,
    NonMonotoneTime,
    SnapshotFormatError,
    UnknownBus,
)
from gridvsla.grid.model import GridCase, Snapshot

logger = logging.getLogger(__name__)

VOLTAGE_COLUMNS = ["time", "bus", "vr", "vi"]
FULL_COLUMNS = VOLTAGE_COLUMNS + ["p", "q"]


@dataclass(frozen=True)
class SnapshotSeries:
    case_ref: str
    snapshots: tuple[Snapshot, ...]
    scenario_id: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        for prev, cur in zip(self.snapshots, self.snapshots[1:]):
            if cur.index <= prev.index:
                raise NonMonotoneTime(
                    f"snapshot indices must increase, got {prev.index} then {cur.index}"
                )

    def __len__(self) -> int:
        return len(self.snapshots)

    @property
    def has_injections(self) -> bool:
        return bool(self.snapshots) and all(s.injections is not None for s in self.snapshots)


def _load_frame(text: str) -> pd.DataFrame:
    try:
        frame = pd.read_csv(io.StringIO(text), float_precision="round_trip", skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise SnapshotFormatError("snapshot file is empty") from None
    except pd.errors.ParserError as exc:
        raise SnapshotFormatError(f"malformed CSV: {exc}") from None
    frame.columns = [str(c).strip() for c in frame.columns]
    if list(frame.columns) not in (VOLTAGE_COLUMNS, FULL_COLUMNS):
        raise SnapshotFormatError(
            f"header must be {','.join(VOLTAGE_COLUMNS)}[,p,q], got {','.join(frame.columns)}"
        )
    if frame.empty:
        raise EmptySeries("snapshot file has a header but no rows")

    for column in frame.columns:
        frame[column] = pd.to_numeric(frame[column], errors="coerce")
    bad = frame.isna().any(axis=1).to_numpy()
    if bad.any():
        # +2: one for the header, one for 1-based numbering.
        raise SnapshotFormatError(f"row {int(np.argmax(bad)) + 2}: missing or non-numeric value")
    if (frame["bus"] % 1 != 0).any():
        raise SnapshotFormatError("bus column must hold integer ids")
    frame["bus"] = frame["bus"].astype(np.int64)
    return frame


def read_snapshot_csv(
    text: str,
    case: GridCase,
    *,
    case_ref: str = "",
    scenario_id: str = "",
) -> SnapshotSeries:
    frame = _load_frame(text)
    with_pq = "p" in frame.columns

    times = frame["time"].to_numpy()
    steps = np.diff(times)
    if (steps < 0).any():
        row = int(np.argmax(steps < 0)) + 1
        raise NonMonotoneTime(f"row {row + 2}: time {times[row]:g} after {times[row - 1]:g}")

    for bus_id in pd.unique(frame["bus"]):
        if not case.has_bus(int(bus_id)):
            raise UnknownBus(int(bus_id))

    dupes = frame.duplicated(["time", "bus"]).to_numpy()
    if dupes.any():
        row = int(np.argmax(dupes))
        raise SnapshotFormatError(
            f"row {row + 2}: bus {frame['bus'].iat[row]} repeated at time {times[row]:g}"
        )

    snapshots: list[Snapshot] = []
    for index, (time, group) in enumerate(frame.groupby("time", sort=True)):
        present = {
            int(b): complex(vr, vi)
            for b, vr, vi in zip(group["bus"], group["vr"], group["vi"])
        }
        for bus_id in case.bus_ids:
            if bus_id not in present:
                raise MissingBus(time=float(time), bus=bus_id)
        voltages = {bus_id: present[bus_id] for bus_id in case.bus_ids}
        injections = None
        if with_pq:
            given = {int(b): complex(p, q) for b, p, q in zip(group["bus"], group["p"], group["q"])}
            injections = {bus_id: given[bus_id] for bus_id in case.bus_ids}
        snapshots.append(
            Snapshot(index=index, voltages=voltages, injections=injections, time=float(time))
        )

    logger.debug(
        "[snapshots] %s: %d snapshots, %d buses, p/q %s",
        scenario_id or case_ref or "<text>",
        len(snapshots),
        len(case.bus_ids),
        "given" if with_pq else "absent",
    )
    return SnapshotSeries(case_ref=case_ref, snapshots=tuple(snapshots), scenario_id=scenario_id)


def write_snapshot_csv(series: SnapshotSeries) -> str:
    with_pq = series.has_injections
    records = []
    for snap in series.snapshots:
        for bus_id in sorted(snap.voltages):
            v = snap.voltages[bus_id]
            row = {"time": snap.time_value, "bus": bus_id, "vr": v.real, "vi": v.imag}
            if with_pq:
                s = snap.injections[bus_id]
                row["p"], row["q"] = s.real, s.imag
            records.append(row)
    columns = FULL_COLUMNS if with_pq else VOLTAGE_COLUMNS
    frame = pd.DataFrame.from_records(records, columns=columns)
    frame["time"] = frame["time"].astype(float)
    frame["bus"] = frame["bus"].astype(np.int64)
    return frame.to_csv(index=False, float_format=f"%{FLOAT_FORMAT}", lineterminator="\n")


def read_snapshot_file(path: str | Path, case: GridCase, *, case_ref: str = "") -> SnapshotSeries:
    """Scenario id defaults to the file stem."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return read_snapshot_csv(text, case, case_ref=case_ref, scenario_id=path.stem)


def expand_snapshot_paths(paths: list[str | Path]) -> list[Path]:
    """Directories expand to their `*.csv` files, sorted by name."""
    expanded: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            expanded.extend(sorted(path.glob("*.csv")))
        else:
            expanded.append(path)
    return expanded
