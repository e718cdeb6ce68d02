from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix

from gridvsla.core.errors import (
    DanglingBranch,
    DimensionMismatch,
    UnknownBus,
    ZeroImpedanceBranch,
)
from gridvsla.grid.model import GridCase, Snapshot

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NeighborView:
    bus: int
    diagonal: complex
    neighbors: tuple[tuple[int, complex], ...]

    @property
    def neighbor_ids(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.neighbors)

    def injection(self, v_bus: complex, neighbor_voltages: dict[int, complex]) -> complex:
        """S_d = V_d * conj(I_d) from this row alone."""
        current = self.diagonal * v_bus
        for k, y_dk in self.neighbors:
            current += y_dk * neighbor_voltages[k]
        return v_bus * current.conjugate()


@dataclass(frozen=True)
class AdmittanceMatrix:
    bus_ids: tuple[int, ...]
    matrix: csr_matrix = field(repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.bus_ids)

    def position(self, bus_id: int) -> int:
        try:
            return self._positions()[bus_id]
        except KeyError:
            raise UnknownBus(bus_id) from None

    def _positions(self) -> dict[int, int]:
        cached = self.__dict__.get("_position_cache")
        if cached is None:
            cached = {bus_id: i for i, bus_id in enumerate(self.bus_ids)}
            object.__setattr__(self, "_position_cache", cached)
        return cached

    def entry(self, d: int, k: int) -> complex:
        return complex(self.matrix[self.position(d), self.position(k)])

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


def branch_admittances(case: GridCase) -> list[tuple[int, int, complex, complex, complex, complex]]:
    """Per in-service branch: (from, to, Yff, Yft, Ytf, Ytt) of the pi model."""
    rows = []
    for branch in case.branches:
        if not branch.in_service:
            continue
        if branch.r == 0.0 and branch.x == 0.0:
            raise ZeroImpedanceBranch(
                f"branch {branch.from_bus}-{branch.to_bus} has zero series impedance"
            )
        ys = branch.series_admittance
        tap = branch.tap * cmath.exp(1j * branch.shift)
        ytt = ys + 0.5j * branch.b_charging
        yff = ytt / (branch.tap * branch.tap)
        yft = -ys / tap.conjugate()
        ytf = -ys / tap
        rows.append((branch.from_bus, branch.to_bus, yff, yft, ytf, ytt))
    return rows


def build_ybus(case: GridCase) -> AdmittanceMatrix:
    ids = case.bus_ids
    position = {bus_id: i for i, bus_id in enumerate(ids)}
    # Insertion-ordered accumulation keeps every row's sum order tied to branch order.
    acc: dict[tuple[int, int], complex] = {}

    for bus in case.buses:
        shunt = complex(bus.g_shunt, bus.b_shunt)
        if shunt != 0:
            i = position[bus.id]
            acc[(i, i)] = acc.get((i, i), 0j) + shunt

    for f_bus, t_bus, yff, yft, ytf, ytt in branch_admittances(case):
        if f_bus not in position or t_bus not in position:
            raise DanglingBranch(f"branch {f_bus}-{t_bus} refers to a missing bus")
        f, t = position[f_bus], position[t_bus]
        acc[(f, f)] = acc.get((f, f), 0j) + yff
        acc[(f, t)] = acc.get((f, t), 0j) + yft
        acc[(t, f)] = acc.get((t, f), 0j) + ytf
        acc[(t, t)] = acc.get((t, t), 0j) + ytt

    n = len(ids)
    if acc:
        keys = list(acc)
        rows = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        cols = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        data = np.fromiter((acc[k] for k in keys), dtype=np.complex128, count=len(keys))
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
        data = np.zeros(0, dtype=np.complex128)
    matrix = csr_matrix((data, (rows, cols)), shape=(n, n), dtype=np.complex128)
    matrix.sort_indices()
    logger.debug("[ybus] built %dx%d admittance matrix, %d stored entries", n, n, matrix.nnz)
    return AdmittanceMatrix(bus_ids=ids, matrix=matrix)


def neighbor_view(y: AdmittanceMatrix, d: int) -> NeighborView:
    i = y.position(d)
    start, stop = y.matrix.indptr[i], y.matrix.indptr[i + 1]
    cols = y.matrix.indices[start:stop]
    values = y.matrix.data[start:stop]
    diagonal = 0j
    neighbors: list[tuple[int, complex]] = []
    for col, value in zip(cols, values):
        if col == i:
            diagonal = complex(value)
        elif value != 0:
            neighbors.append((y.bus_ids[col], complex(value)))
    return NeighborView(bus=d, diagonal=diagonal, neighbors=tuple(neighbors))


def voltage_vector(y: AdmittanceMatrix, snapshot: Snapshot) -> np.ndarray:
    if set(snapshot.voltages) != set(y.bus_ids):
        raise DimensionMismatch(
            f"snapshot {snapshot.index} has {len(snapshot.voltages)} buses, matrix has {y.dimension}"
        )
    return np.array([snapshot.voltages[bus_id] for bus_id in y.bus_ids], dtype=np.complex128)


def compute_injections(y: AdmittanceMatrix, snapshot: Snapshot) -> Snapshot:
    """Net complex injections S = V * conj(Y V), generation-positive."""
    v = voltage_vector(y, snapshot)
    s = v * np.conj(y.matrix @ v)
    return snapshot.with_injections({bus_id: complex(s[i]) for i, bus_id in enumerate(y.bus_ids)})
