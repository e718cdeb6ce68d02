from gridvsla.grid.model import Branch, Bus, BusKind, Generator, GridCase, Snapshot
from gridvsla.grid.ybus import (
    AdmittanceMatrix,
    NeighborView,
    build_ybus,
    compute_injections,
    neighbor_view,
    voltage_vector,
)

__all__ = [
    "AdmittanceMatrix",
    "Branch",
    "Bus",
    "BusKind",
    "Generator",
    "GridCase",
    "NeighborView",
    "Snapshot",
    "build_ybus",
    "compute_injections",
    "neighbor_view",
    "voltage_vector",
]
