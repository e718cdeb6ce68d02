"""Dense power-flow Jacobian diagnostics: singular values and eigenvalue real parts."""
from __future__ import annotations

import logging

import numpy as np
from scipy import linalg

from gridvsla.config.settings import CONVERGED_GUARD
from gridvsla.core.errors import NotConverged
from gridvsla.grid.model import GridCase, Snapshot
from gridvsla.grid.ybus import build_ybus, voltage_vector
from gridvsla.services.powerflow import assemble_jacobian, bus_roles, mismatch, role_indices

logger = logging.getLogger(__name__)


def jacobian(case: GridCase, snapshot: Snapshot) -> np.ndarray:
    f = mismatch(case, snapshot)
    worst = float(np.max(np.abs(f))) if f.size else 0.0
    if worst > CONVERGED_GUARD:
        raise NotConverged(
            f"snapshot {snapshot.index} is not a power-flow solution (max mismatch {worst:.3e})"
        )
    y = build_ybus(case)
    pv, pq = role_indices(case, bus_roles(case))
    v = voltage_vector(y, snapshot)
    return assemble_jacobian(y.matrix, v, np.r_[pv, pq], pq).toarray()


def smallest_singular_values(jac: np.ndarray, k: int = 1) -> list[float]:
    """The `k` smallest singular values, ascending; `k` is clamped to the matrix dimension."""
    if jac.size == 0 or k < 1:
        return []
    values = np.sort(linalg.svdvals(jac))
    return [float(s) for s in values[: min(k, values.size)]]


def jacobian_eigenvalues(jac: np.ndarray) -> list[float]:
    if jac.size == 0:
        return []
    return sorted(float(z.real) for z in linalg.eigvals(jac))


def sigma_min(case: GridCase, snapshot: Snapshot) -> float:
    values = smallest_singular_values(jacobian(case, snapshot), 1)
    if not values:
        return float("nan")
    logger.debug("[jacobian] snapshot %d sigma_min %.6g", snapshot.index, values[0])
    return values[0]
