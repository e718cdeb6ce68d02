"""Local Computation Index: per-bus t-parameters, P/Q loci and the distance between the two
local power-flow solutions, normalized by the same distance at no load.

Everything here reads one NeighborView and the voltages of the bus and its neighbors;
nothing else of the network is reachable.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from gridvsla.config.settings import LINEARITY_EPS, RADICAND_EPS, TANGENCY_EPS
from gridvsla.core.errors import (
    BothLinear,
    ConcentricCircles,
    GeometryError,
    ImaginaryRadius,
    IsolatedBus,
    MissingBus,
    MissingNeighborVoltage,
    NoIntersection,
    ZeroSusceptance,
)
from gridvsla.core.geometry import (
    CIRCLE_CIRCLE,
    P_LINE,
    Q_LINE,
    Circle,
    Line,
    Locus,
    SolutionPair,
    intersect_circles,
    intersect_via_mirror,
    reflect_circle,
)
from gridvsla.grid.model import Snapshot
from gridvsla.grid.ybus import AdmittanceMatrix, NeighborView, neighbor_view

logger = logging.getLogger(__name__)

_NO_LOAD_VOLTAGE = 1.0 + 0.0j


class LciFlag(str, Enum):
    OK = "Ok"
    CLAMPED_TANGENT = "ClampedTangent"
    NO_INTERSECTION = "NoIntersection"


@dataclass(frozen=True)
class TParams:
    t1: float
    t2: float
    t3: float
    t4: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(t) for t in (self.t1, self.t2, self.t3, self.t4)):
            raise ValueError(f"t-parameters must be finite, got {self}")


@dataclass(frozen=True)
class LciValue:
    bus: int
    raw_distance: float
    no_load_distance: float
    lci: float
    flag: LciFlag = LciFlag.OK
    v_high: complex | None = None
    v_low: complex | None = None
    path: str = CIRCLE_CIRCLE

    def __post_init__(self) -> None:
        if not self.lci >= 0:
            raise ValueError(f"bus {self.bus}: lci must be >= 0, got {self.lci}")


def t_params(view: NeighborView, neighbor_voltages: Mapping[int, complex]) -> TParams:
    """Coefficients of p = t1|V|^2 + t2 vr + t3 vi and q = t4|V|^2 - t3 vr + t2 vi at `view.bus`.

    t1/t4 come from the full diagonal, so bus shunts and line charging stay inside the
    identity; with neither present they equal the negated sums of the off-diagonals.
    """
    t2 = 0.0
    t3 = 0.0
    for k, y_dk in view.neighbors:
        if k not in neighbor_voltages:
            raise MissingNeighborVoltage(bus=view.bus, neighbor=k)
        v_k = complex(neighbor_voltages[k])
        g, b = y_dk.real, y_dk.imag
        t2 += v_k.real * g - v_k.imag * b
        t3 += v_k.real * b + v_k.imag * g
    return TParams(t1=view.diagonal.real, t2=t2, t3=t3, t4=-view.diagonal.imag)


def _radius(radicand: float) -> float:
    if radicand < -RADICAND_EPS:
        raise ImaginaryRadius(f"locus radius^2 = {radicand:.3e} < 0")
    return math.sqrt(max(radicand, 0.0))


def loci(t: TParams, p: float, q: float, eps_lin: float = LINEARITY_EPS) -> tuple[Locus, Locus]:
    p_linear = abs(t.t1) <= eps_lin
    q_linear = abs(t.t4) <= eps_lin
    cross = t.t2 * t.t2 + t.t3 * t.t3
    if p_linear and q_linear and cross <= eps_lin * eps_lin:
        raise IsolatedBus("bus has no admittance to its neighbors or ground")

    if p_linear:
        p_locus: Locus = Line(t.t2, t.t3, p)
    else:
        p_locus = Circle(
            cx=-t.t2 / (2.0 * t.t1),
            cy=-t.t3 / (2.0 * t.t1),
            radius=_radius(p / t.t1 + cross / (4.0 * t.t1 * t.t1)),
        )
    if q_linear:
        q_locus: Locus = Line(-t.t3, t.t2, q)
    else:
        q_locus = Circle(
            cx=t.t3 / (2.0 * t.t4),
            cy=-t.t2 / (2.0 * t.t4),
            radius=_radius(q / t.t4 + cross / (4.0 * t.t4 * t.t4)),
        )
    return p_locus, q_locus


def mirror_circle(q_locus: Circle, p_line: Line) -> Circle:
    """Reflection of the Q-circle across the P-line (which carries t2, t3 and p)."""
    return reflect_circle(q_locus, p_line)


def locus_path(t: TParams, eps_lin: float = LINEARITY_EPS) -> str:
    if abs(t.t1) <= eps_lin:
        return P_LINE
    if abs(t.t4) <= eps_lin:
        return Q_LINE
    return CIRCLE_CIRCLE


def solution_pair(
    t: TParams,
    p: float,
    q: float,
    *,
    eps_lin: float = LINEARITY_EPS,
    eps: float = TANGENCY_EPS,
) -> SolutionPair:
    p_locus, q_locus = loci(t, p, q, eps_lin)
    if isinstance(p_locus, Circle) and isinstance(q_locus, Circle):
        return intersect_circles(p_locus, q_locus, eps=eps, path=CIRCLE_CIRCLE)
    if isinstance(p_locus, Line) and isinstance(q_locus, Circle):
        return intersect_via_mirror(q_locus, p_locus, eps=eps, path=P_LINE)
    if isinstance(p_locus, Circle) and isinstance(q_locus, Line):
        return intersect_via_mirror(p_locus, q_locus, eps=eps, path=Q_LINE)
    raise BothLinear(f"t1={t.t1:.3e} and t4={t.t4:.3e} are both below {eps_lin:g}")


def no_load_distance(view: NeighborView) -> float:
    if not view.neighbors:
        raise IsolatedBus(f"bus {view.bus} has no neighbors")
    t = t_params(view, {k: _NO_LOAD_VOLTAGE for k in view.neighbor_ids})
    distance = solution_pair(t, 0.0, 0.0).distance
    if not distance > 0:
        raise GeometryError(f"bus {view.bus}: no-load solutions coincide")
    return distance


def _local_voltages(view: NeighborView, snapshot: Snapshot) -> tuple[complex, dict[int, complex]]:
    if view.bus not in snapshot.voltages:
        raise MissingBus(time=snapshot.time_value, bus=view.bus)
    neighbors: dict[int, complex] = {}
    for k in view.neighbor_ids:
        if k not in snapshot.voltages:
            raise MissingNeighborVoltage(bus=view.bus, neighbor=k)
        neighbors[k] = complex(snapshot.voltages[k])
    return complex(snapshot.voltages[view.bus]), neighbors


def lci(view: NeighborView, snapshot: Snapshot, *, no_load: float | None = None) -> LciValue:
    if not view.neighbors:
        raise IsolatedBus(f"bus {view.bus} has no neighbors")
    v_bus, neighbors = _local_voltages(view, snapshot)
    if snapshot.injections is not None and view.bus in snapshot.injections:
        s = complex(snapshot.injections[view.bus])
    else:
        s = view.injection(v_bus, neighbors)
    t = t_params(view, neighbors)
    d0 = no_load_distance(view) if no_load is None else no_load

    try:
        pair = solution_pair(t, s.real, s.imag)
    except (NoIntersection, ImaginaryRadius, ConcentricCircles) as exc:
        logger.debug("[lci] bus %d snapshot %d beyond the nose: %s", view.bus, snapshot.index, exc)
        return LciValue(
            bus=view.bus,
            raw_distance=0.0,
            no_load_distance=d0,
            lci=0.0,
            flag=LciFlag.NO_INTERSECTION,
            path=locus_path(t),
        )

    raw = pair.distance
    return LciValue(
        bus=view.bus,
        raw_distance=raw,
        no_load_distance=d0,
        lci=raw / d0,
        flag=LciFlag.CLAMPED_TANGENT if pair.tangent else LciFlag.OK,
        v_high=pair.v1,
        v_low=pair.v2,
        path=pair.path,
    )


def bus_lci_table(
    y: AdmittanceMatrix,
    snapshot: Snapshot,
    buses: Iterable[int],
    *,
    no_load_cache: dict[int, float] | None = None,
) -> dict[int, LciValue]:
    """LCI at each bus of interest; no-load distances are cached per bus across calls."""
    cache = no_load_cache if no_load_cache is not None else {}
    table: dict[int, LciValue] = {}
    for bus_id in buses:
        view = neighbor_view(y, bus_id)
        if bus_id not in cache:
            cache[bus_id] = no_load_distance(view)
        table[bus_id] = lci(view, snapshot, no_load=cache[bus_id])
    return table


def two_bus_lci(g: float, b: float, load: float) -> float:
    """Closed-form LCI of a PQ bus fed from a 1 pu source through y = g + jb, unity-pf load."""
    mag_sq = g * g + b * b
    if not mag_sq > 0:
        raise ValueError("two-bus line admittance must be nonzero")
    if load < 0:
        raise ValueError(f"load must be >= 0 (load-positive), got {load}")
    b2 = b * b
    radicand = b2 * b2 + 2 * b2 * g * g - 4 * b2 * g * load - 4 * b2 * load * load + g**4 - 4 * g**3 * load
    return math.sqrt(abs(radicand)) / mag_sq


def two_bus_pmax(g: float, b: float) -> float:
    """Maximum unity-pf load transferable over y = g + jb from a 1 pu source."""
    if b == 0:
        raise ZeroSusceptance("maximum transferable power needs b != 0")
    mag_sq = g * g + b * b
    return (-mag_sq * g + mag_sq**1.5) / (2 * b * b)


__all__ = [
    "LciFlag",
    "LciValue",
    "TParams",
    "bus_lci_table",
    "intersect_circles",
    "lci",
    "loci",
    "locus_path",
    "mirror_circle",
    "no_load_distance",
    "solution_pair",
    "t_params",
    "two_bus_lci",
    "two_bus_pmax",
]
