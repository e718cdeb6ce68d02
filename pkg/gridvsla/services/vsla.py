"""Scenario-level voltage-stability location analysis.

Per bus the critical value is the smallest LCI over a snapshot series; the
system-critical value is the smallest over buses. Buses whose critical value
sits far below the rest (z-score at or under a threshold) form the critical
set, and sets from many scenarios are merged with box-plot statistics.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from gridvsla.config.settings import DEGENERATE_STD, Z_THRESHOLD
from gridvsla.core.errors import (
    DegenerateDistribution,
    EmptyInput,
    EmptySeries,
    UnknownBus,
)
from gridvsla.grid.model import GridCase
from gridvsla.grid.ybus import AdmittanceMatrix, compute_injections, neighbor_view
from gridvsla.io.snapshots import SnapshotSeries
from gridvsla.services.lci import LciFlag, LciValue, bus_lci_table, no_load_distance

logger = logging.getLogger(__name__)

SCOPE_ALL = "all"
SCOPE_FILTERED = "filtered"


@dataclass(frozen=True)
class BusSeries:
    bus: int
    values: tuple[tuple[int, LciValue], ...]


@dataclass(frozen=True)
class BoxStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float

    @classmethod
    def from_values(cls, values: Sequence[float]) -> BoxStats:
        data = np.asarray(values, dtype=float)
        if data.size == 0:
            raise EmptyInput("box statistics need at least one value")
        q1, median, q3 = np.percentile(data, [25.0, 50.0, 75.0], method="linear")
        return cls(
            min=float(data.min()),
            q1=float(q1),
            median=float(median),
            q3=float(q3),
            max=float(data.max()),
        )

    @property
    def skew(self) -> str:
        """Labels "right" when the median sits nearer the upper quartile, "left" when nearer the lower."""
        upper = self.q3 - self.median
        lower = self.median - self.q1
        if np.isclose(upper, lower, rtol=0.0, atol=1e-12):
            return "symmetric"
        return "right" if upper < lower else "left"


@dataclass(frozen=True)
class ScenarioReport:
    scenario_id: str
    per_bus_critical: dict[int, tuple[float, int]]
    system_critical: float
    critical_location: int
    z_scores: dict[int, float]
    critical_set: frozenset[int]
    stats: dict[int, BoxStats] = field(default_factory=dict)
    flags: dict[int, tuple[str, ...]] = field(default_factory=dict)
    scope: str = SCOPE_ALL
    skew: dict[int, str] = field(default_factory=dict)
    scenarios: tuple[str, ...] = ()
    threshold: float = Z_THRESHOLD


def bus_critical(series: BusSeries) -> tuple[float, int]:
    if not series.values:
        raise EmptySeries(f"bus {series.bus} has no LCI values")
    best_value, best_index = series.values[0][1].lci, series.values[0][0]
    for index, value in series.values[1:]:
        if value.lci < best_value:
            best_value, best_index = value.lci, index
    return best_value, best_index


def system_critical(per_bus: Mapping[int, float]) -> tuple[float, int]:
    if not per_bus:
        raise EmptyInput("no buses to take a system-critical value over")
    location = min(per_bus, key=lambda bus: (per_bus[bus], bus))
    return per_bus[location], location


def _spread(values: np.ndarray, sample_std: bool) -> float:
    if values.size < (2 if sample_std else 1):
        return 0.0
    return float(np.std(values, ddof=1 if sample_std else 0))


def z_scores(criticals: Mapping[int, float], *, sample_std: bool = False) -> dict[int, float]:
    """Degenerate spread (or fewer than two buses) warns and scores every bus 0."""
    buses = list(criticals)
    values = np.array([criticals[b] for b in buses], dtype=float)
    std = _spread(values, sample_std)
    if len(buses) < 2 or std < DEGENERATE_STD:
        message = f"critical LCI spread {std:.3e} over {len(buses)} buses; z-scores undefined"
        warnings.warn(message, DegenerateDistribution, stacklevel=2)
        return {b: 0.0 for b in buses}
    mean = float(values.mean())
    return {b: float((v - mean) / std) for b, v in zip(buses, values)}


def select_critical(z: Mapping[int, float], threshold: float = Z_THRESHOLD) -> frozenset[int]:
    return frozenset(b for b, score in z.items() if score <= threshold)


def buses_of_interest(case: GridCase, bus_filter: Iterable[int] | None = None) -> tuple[int, ...]:
    """All PQ buses by default; a filter must name buses of the case."""
    if bus_filter is None:
        return case.pq_bus_ids()
    selected = tuple(bus_filter)
    for bus_id in selected:
        if not case.has_bus(bus_id):
            raise UnknownBus(bus_id)
    return selected


def no_load_table(y: AdmittanceMatrix, buses: Iterable[int]) -> dict[int, float]:
    return {bus_id: no_load_distance(neighbor_view(y, bus_id)) for bus_id in buses}


def evaluate_series(
    y: AdmittanceMatrix,
    series: SnapshotSeries,
    buses: Sequence[int],
    *,
    no_load_cache: dict[int, float] | None = None,
) -> list[BusSeries]:
    per_bus: dict[int, list[tuple[int, LciValue]]] = {b: [] for b in buses}
    cache = dict(no_load_cache) if no_load_cache is not None else {}
    for snapshot in series.snapshots:
        if snapshot.injections is None:
            snapshot = compute_injections(y, snapshot)
        table = bus_lci_table(y, snapshot, buses, no_load_cache=cache)
        for bus_id, value in table.items():
            per_bus[bus_id].append((snapshot.index, value))
    return [BusSeries(bus=b, values=tuple(per_bus[b])) for b in buses]


def build_scenario_report(
    scenario_id: str,
    series: Iterable[BusSeries],
    *,
    threshold: float = Z_THRESHOLD,
    sample_std: bool = False,
    scope: str = SCOPE_ALL,
) -> ScenarioReport:
    per_bus_critical: dict[int, tuple[float, int]] = {}
    flags: dict[int, tuple[str, ...]] = {}
    for bus_series in sorted(series, key=lambda s: s.bus):
        per_bus_critical[bus_series.bus] = bus_critical(bus_series)
        seen = sorted({v.flag.value for _, v in bus_series.values if v.flag is not LciFlag.OK})
        if seen:
            flags[bus_series.bus] = tuple(seen)

    criticals = {b: value for b, (value, _) in per_bus_critical.items()}
    system_value, location = system_critical(criticals)
    z = z_scores(criticals, sample_std=sample_std)
    degenerate = all(score == 0.0 for score in z.values())
    selected = frozenset() if degenerate else select_critical(z, threshold)

    logger.info(
        "[vsla] %s: system critical %.6g at bus %d, %d/%d buses selected",
        scenario_id,
        system_value,
        location,
        len(selected),
        len(per_bus_critical),
    )
    return ScenarioReport(
        scenario_id=scenario_id,
        per_bus_critical=per_bus_critical,
        system_critical=system_value,
        critical_location=location,
        z_scores=z,
        critical_set=selected,
        flags=flags,
        scope=scope,
        scenarios=(scenario_id,),
        threshold=threshold,
    )


def analyze_series(
    y: AdmittanceMatrix,
    series: SnapshotSeries,
    buses: Sequence[int],
    *,
    threshold: float = Z_THRESHOLD,
    sample_std: bool = False,
    scope: str = SCOPE_ALL,
    no_load_cache: dict[int, float] | None = None,
) -> ScenarioReport:
    bus_series = evaluate_series(y, series, buses, no_load_cache=no_load_cache)
    return build_scenario_report(
        series.scenario_id,
        bus_series,
        threshold=threshold,
        sample_std=sample_std,
        scope=scope,
    )


def aggregate_scenarios(reports: Iterable[ScenarioReport]) -> ScenarioReport:
    ordered = sorted(reports, key=lambda r: r.scenario_id)
    if not ordered:
        raise EmptyInput("no scenario reports to aggregate")

    per_bus_critical: dict[int, tuple[float, int]] = {}
    z: dict[int, float] = {}
    flags: dict[int, set[str]] = {}
    values: dict[int, list[float]] = {}
    critical_set: set[int] = set()
    for report in ordered:
        critical_set |= report.critical_set
        for bus_id, (value, index) in report.per_bus_critical.items():
            values.setdefault(bus_id, []).append(value)
            if bus_id not in per_bus_critical or value < per_bus_critical[bus_id][0]:
                per_bus_critical[bus_id] = (value, index)
        for bus_id, score in report.z_scores.items():
            z[bus_id] = min(score, z.get(bus_id, score))
        for bus_id, seen in report.flags.items():
            flags.setdefault(bus_id, set()).update(seen)

    per_bus_critical = dict(sorted(per_bus_critical.items()))
    system_value, location = system_critical({b: v for b, (v, _) in per_bus_critical.items()})
    stats = {b: BoxStats.from_values(values[b]) for b in sorted(critical_set)}
    scope = SCOPE_FILTERED if any(r.scope == SCOPE_FILTERED for r in ordered) else SCOPE_ALL
    return ScenarioReport(
        scenario_id="aggregate",
        per_bus_critical=per_bus_critical,
        system_critical=system_value,
        critical_location=location,
        z_scores=dict(sorted(z.items())),
        critical_set=frozenset(critical_set),
        stats=stats,
        flags={b: tuple(sorted(s)) for b, s in sorted(flags.items())},
        scope=scope,
        skew={b: s.skew for b, s in stats.items()},
        scenarios=tuple(r.scenario_id for r in ordered),
        threshold=ordered[0].threshold,
    )


def histogram(values: Iterable[float], bins: int) -> list[tuple[float, int]]:
    """(left edge, count) per equal-width bin over [min, max]; bins are right-open except the last."""
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    data = np.asarray(list(values), dtype=float)
    if data.size == 0:
        return []
    if data.min() == data.max():
        return [(float(data[0]), int(data.size))]
    counts, edges = np.histogram(data, bins=bins)
    return [(float(edge), int(count)) for edge, count in zip(edges[:-1], counts)]


def z_score_histogram(z: Mapping[int, float], bins: int) -> list[tuple[float, int]]:
    return histogram(z.values(), bins)
