from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping

from gridvsla.core.errors import DanglingBranch, MissingBus, SemanticError


class BusKind(str, Enum):
    SLACK = "Slack"
    PV = "PV"
    PQ = "PQ"


@dataclass(frozen=True)
class Bus:
    id: int
    kind: BusKind
    p_load: float = 0.0
    q_load: float = 0.0
    g_shunt: float = 0.0
    b_shunt: float = 0.0
    v_init_mag: float = 1.0
    v_init_ang: float = 0.0
    base_kv: float = 0.0

    def __post_init__(self) -> None:
        if int(self.id) <= 0:
            raise SemanticError(f"bus id must be a positive integer, got {self.id}")
        if not self.v_init_mag > 0:
            raise SemanticError(f"bus {self.id}: v_init_mag must be > 0, got {self.v_init_mag}")


@dataclass(frozen=True)
class Branch:
    from_bus: int
    to_bus: int
    r: float
    x: float
    b_charging: float = 0.0
    tap: float = 1.0
    shift: float = 0.0
    in_service: bool = True
    is_transformer: bool = False

    def __post_init__(self) -> None:
        if self.from_bus == self.to_bus:
            raise SemanticError(f"branch {self.from_bus}-{self.to_bus} connects a bus to itself")
        if not self.tap > 0:
            raise SemanticError(f"branch {self.from_bus}-{self.to_bus}: tap must be > 0, got {self.tap}")

    @property
    def series_admittance(self) -> complex:
        return 1.0 / complex(self.r, self.x)


@dataclass(frozen=True)
class Generator:
    bus: int
    p_gen: float = 0.0
    q_gen: float = 0.0
    v_setpoint: float = 1.0
    q_min: float = -math.inf
    q_max: float = math.inf
    in_service: bool = True

    def __post_init__(self) -> None:
        if self.q_min > self.q_max:
            raise SemanticError(
                f"generator at bus {self.bus}: q_min {self.q_min} exceeds q_max {self.q_max}"
            )


@dataclass(frozen=True)
class GridCase:
    base_mva: float
    buses: tuple[Bus, ...]
    branches: tuple[Branch, ...] = ()
    generators: tuple[Generator, ...] = ()
    _index: dict[int, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "buses", tuple(self.buses))
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.base_mva > 0:
            raise SemanticError(f"base_mva must be > 0, got {self.base_mva}")

        index: dict[int, int] = {}
        for position, bus in enumerate(self.buses):
            if bus.id in index:
                raise SemanticError(f"duplicate bus id {bus.id}")
            index[bus.id] = position
        object.__setattr__(self, "_index", index)

        slack_count = sum(1 for bus in self.buses if bus.kind is BusKind.SLACK)
        if slack_count != 1:
            raise SemanticError(f"expected exactly one slack bus, found {slack_count}")

        for branch in self.branches:
            for end in (branch.from_bus, branch.to_bus):
                if end not in index:
                    raise DanglingBranch(
                        f"branch {branch.from_bus}-{branch.to_bus} refers to missing bus {end}"
                    )
        for gen in self.generators:
            if gen.bus not in index:
                raise SemanticError(f"generator refers to missing bus {gen.bus}")

    @property
    def bus_ids(self) -> tuple[int, ...]:
        return tuple(bus.id for bus in self.buses)

    @property
    def slack_bus(self) -> Bus:
        return next(bus for bus in self.buses if bus.kind is BusKind.SLACK)

    def has_bus(self, bus_id: int) -> bool:
        return bus_id in self._index

    def bus(self, bus_id: int) -> Bus:
        return self.buses[self._index[bus_id]]

    def position(self, bus_id: int) -> int:
        return self._index[bus_id]

    def pq_bus_ids(self) -> tuple[int, ...]:
        return tuple(bus.id for bus in self.buses if bus.kind is BusKind.PQ)

    def generators_at(self, bus_id: int) -> tuple[Generator, ...]:
        return tuple(g for g in self.generators if g.bus == bus_id and g.in_service)

    def restricted_to(self, bus_ids: set[int]) -> GridCase:
        """Sub-case on `bus_ids` with branches internal to that set (slack kept for validity)."""
        keep = set(bus_ids) | {self.slack_bus.id}
        return replace(
            self,
            buses=tuple(b for b in self.buses if b.id in keep),
            branches=tuple(
                br for br in self.branches if br.from_bus in keep and br.to_bus in keep
            ),
            generators=tuple(g for g in self.generators if g.bus in keep),
        )


@dataclass(frozen=True)
class Snapshot:
    index: int
    voltages: Mapping[int, complex]
    injections: Mapping[int, complex] | None = None
    time: float | None = None

    @property
    def time_value(self) -> float:
        return float(self.index) if self.time is None else float(self.time)

    def with_injections(self, injections: Mapping[int, complex]) -> Snapshot:
        return replace(self, injections=dict(injections))

    def check_covers(self, case: GridCase) -> None:
        for bus_id in case.bus_ids:
            if bus_id not in self.voltages:
                raise MissingBus(time=self.time_value, bus=bus_id)
