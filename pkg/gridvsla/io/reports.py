"""Report emitters: scenario reports (JSON/CSV), histograms (TSV) and sweep tables (JSON/CSV).

JSON keys are sorted and floats are written with repr, so identical inputs give
byte-identical files. CSV/TSV floats use the canonical 17-digit format.
"""
from __future__ import annotations

import json
from typing import Any, Sequence

import pandas as pd

from gridvsla.config.settings import FLOAT_FORMAT
from gridvsla.services.stress import SweepRow, critical_bus
from gridvsla.services.vsla import ScenarioReport

_CSV_FLOAT = f"%{FLOAT_FORMAT}"


def _dump(document: Any) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def _csv(frame: pd.DataFrame, sep: str = ",") -> str:
    return frame.to_csv(index=False, sep=sep, float_format=_CSV_FLOAT, lineterminator="\n")


def report_to_dict(report: ScenarioReport) -> dict[str, Any]:
    buses = [
        {
            "bus": bus_id,
            "critical_lci": value,
            "at_index": index,
            "z": report.z_scores.get(bus_id, 0.0),
            "selected": bus_id in report.critical_set,
            "flags": list(report.flags.get(bus_id, ())),
        }
        for bus_id, (value, index) in sorted(report.per_bus_critical.items())
    ]
    stats = {
        str(bus_id): {
            "min": s.min,
            "q1": s.q1,
            "median": s.median,
            "q3": s.q3,
            "max": s.max,
            "skew": report.skew.get(bus_id, s.skew),
        }
        for bus_id, s in sorted(report.stats.items())
    }
    return {
        "scenario_id": report.scenario_id,
        "scenarios": list(report.scenarios),
        "threshold": report.threshold,
        "buses": buses,
        "critical_set": sorted(report.critical_set),
        "system": {
            "critical": report.system_critical,
            "location": report.critical_location,
            "scope": report.scope,
        },
        "stats": stats,
    }


def emit_report_json(reports: Sequence[ScenarioReport], aggregate: ScenarioReport) -> str:
    ordered = sorted(reports, key=lambda r: r.scenario_id)
    return _dump(
        {
            "aggregate": report_to_dict(aggregate),
            "scenarios": [report_to_dict(r) for r in ordered],
        }
    )


_REPORT_COLUMNS = [
    "scenario_id",
    "bus",
    "critical_lci",
    "at_index",
    "z",
    "selected",
    "flags",
    "min",
    "q1",
    "median",
    "q3",
    "max",
    "skew",
]


def emit_report_csv(reports: Sequence[ScenarioReport], aggregate: ScenarioReport) -> str:
    """One row per (scenario, bus); aggregate rows last, carrying the box statistics."""
    records: list[dict[str, Any]] = []
    for report in [*sorted(reports, key=lambda r: r.scenario_id), aggregate]:
        for bus_id, (value, index) in sorted(report.per_bus_critical.items()):
            row: dict[str, Any] = {
                "scenario_id": report.scenario_id,
                "bus": bus_id,
                "critical_lci": value,
                "at_index": index,
                "z": report.z_scores.get(bus_id, 0.0),
                "selected": int(bus_id in report.critical_set),
                "flags": "|".join(report.flags.get(bus_id, ())),
            }
            stats = report.stats.get(bus_id)
            if stats is not None:
                row.update(
                    min=stats.min,
                    q1=stats.q1,
                    median=stats.median,
                    q3=stats.q3,
                    max=stats.max,
                    skew=report.skew.get(bus_id, stats.skew),
                )
            records.append(row)
    frame = pd.DataFrame.from_records(records, columns=_REPORT_COLUMNS)
    return _csv(frame)


def emit_histogram_tsv(rows: Sequence[tuple[float, int]]) -> str:
    frame = pd.DataFrame.from_records(list(rows), columns=["edge", "count"])
    frame["edge"] = frame["edge"].astype(float)
    frame["count"] = frame["count"].astype("int64")
    return _csv(frame, sep="\t")


def _magnitude(v: complex | None) -> float | None:
    return None if v is None else abs(v)


def emit_sweep_json(
    rows: Sequence[SweepRow],
    lambda_max: float,
    *,
    pv_trace: bool = False,
    eigenvalues: Sequence[float] | None = None,
) -> str:
    points = []
    for row in rows:
        point: dict[str, Any] = {
            "lambda": row.lam,
            "total_load_mw": row.total_load_mw,
            "lci": {str(b): v.lci for b, v in row.lci.items()},
            "flags": {str(b): v.flag.value for b, v in row.lci.items()},
        }
        if row.sigma_min is not None:
            point["sigma_min"] = row.sigma_min
        if pv_trace:
            point["v_high"] = {str(b): _magnitude(v.v_high) for b, v in row.lci.items()}
            point["v_low"] = {str(b): _magnitude(v.v_low) for b, v in row.lci.items()}
        points.append(point)
    document: dict[str, Any] = {"lambda_max": lambda_max, "points": points}
    if rows:
        bus_id, value = critical_bus(rows[-1])
        document["critical_bus"] = bus_id
        document["critical_lci"] = value
    if eigenvalues is not None:
        document["jacobian_eigenvalues"] = [float(x) for x in eigenvalues]
    return _dump(document)


def emit_sweep_csv(rows: Sequence[SweepRow], *, pv_trace: bool = False) -> str:
    """Wide table: lambda, total_load_mw, lci_<bus>... [, sigma_min] [, vhigh_<bus>..., vlow_<bus>...]."""
    records: list[dict[str, Any]] = []
    for row in rows:
        record: dict[str, Any] = {"lambda": row.lam, "total_load_mw": row.total_load_mw}
        for bus_id, value in row.lci.items():
            record[f"lci_{bus_id}"] = value.lci
        if row.sigma_min is not None:
            record["sigma_min"] = row.sigma_min
        if pv_trace:
            for bus_id, value in row.lci.items():
                record[f"vhigh_{bus_id}"] = _magnitude(value.v_high)
            for bus_id, value in row.lci.items():
                record[f"vlow_{bus_id}"] = _magnitude(value.v_low)
        records.append(record)
    return _csv(pd.DataFrame.from_records(records))
