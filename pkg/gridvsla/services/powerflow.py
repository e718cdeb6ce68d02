"""Newton-Raphson AC power flow in polar form.

Unknowns are ordered [Va(pv), Va(pq), Vm(pq)] and the mismatch vector
[dP(pv), dP(pq), dQ(pq)]; the Jacobian module uses the same ordering.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import MatrixRankWarning, spsolve

from gridvsla.config.settings import (
    DIVERGENCE_MISMATCH,
    PF_MAX_ITER,
    PF_TOLERANCE,
    Q_LIMIT_MAX_ROUNDS,
)
from gridvsla.core.errors import Diverged, SingularJacobian, UsageError
from gridvsla.grid.model import BusKind, GridCase, Snapshot
from gridvsla.grid.ybus import build_ybus, voltage_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveOptions:
    tol: float = PF_TOLERANCE
    max_iter: int = PF_MAX_ITER
    enforce_q_limits: bool = False
    flat_start: bool = True

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise UsageError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise UsageError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class BusRoles:
    slack: int
    pv: tuple[int, ...]
    pq: tuple[int, ...]


@dataclass(frozen=True)
class PowerFlowResult:
    snapshot: Snapshot
    iterations: int
    max_mismatch: float
    switched_to_pq: tuple[int, ...] = ()


def bus_roles(case: GridCase, as_pq: frozenset[int] = frozenset()) -> BusRoles:
    """PV buses without an in-service generator (or listed in `as_pq`) are solved as PQ."""
    pv: list[int] = []
    pq: list[int] = []
    for bus in case.buses:
        if bus.kind is BusKind.SLACK:
            continue
        if bus.kind is BusKind.PV and case.generators_at(bus.id) and bus.id not in as_pq:
            pv.append(bus.id)
        else:
            pq.append(bus.id)
    return BusRoles(slack=case.slack_bus.id, pv=tuple(pv), pq=tuple(pq))


def scheduled_injections(case: GridCase, fixed_q: dict[int, float] | None = None) -> np.ndarray:
    """Net scheduled injection per bus (generation minus load), in case bus order."""
    fixed_q = fixed_q or {}
    s = np.zeros(len(case.buses), dtype=np.complex128)
    for i, bus in enumerate(case.buses):
        gens = case.generators_at(bus.id)
        p_gen = sum(g.p_gen for g in gens)
        q_gen = fixed_q.get(bus.id, sum(g.q_gen for g in gens))
        s[i] = complex(p_gen - bus.p_load, q_gen - bus.q_load)
    return s


def _setpoint(case: GridCase, bus_id: int) -> float:
    gens = case.generators_at(bus_id)
    return gens[0].v_setpoint if gens else case.bus(bus_id).v_init_mag


def _initial_voltages(
    case: GridCase,
    roles: BusRoles,
    opts: SolveOptions,
    start: Snapshot | None,
) -> np.ndarray:
    if start is not None:
        v = np.array([complex(start.voltages[b]) for b in case.bus_ids], dtype=np.complex128)
        vm, va = np.abs(v), np.angle(v)
    elif opts.flat_start:
        vm = np.ones(len(case.buses))
        va = np.zeros(len(case.buses))
    else:
        vm = np.array([bus.v_init_mag for bus in case.buses], dtype=float)
        va = np.array([bus.v_init_ang for bus in case.buses], dtype=float)

    for bus_id in (roles.slack, *roles.pv):
        vm[case.position(bus_id)] = _setpoint(case, bus_id)
    va[case.position(roles.slack)] = case.slack_bus.v_init_ang
    return vm * np.exp(1j * va)


def dsbus_dv(ybus: sparse.csr_matrix, v: np.ndarray) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """Partial derivatives of S = V conj(Y V) with respect to |V| and angle(V)."""
    ibus = ybus @ v
    diag_v = sparse.diags(v)
    diag_ibus = sparse.diags(ibus)
    diag_vnorm = sparse.diags(v / np.abs(v))
    ds_dvm = diag_v @ (ybus @ diag_vnorm).conj() + diag_ibus.conj() @ diag_vnorm
    ds_dva = 1j * diag_v @ (diag_ibus - ybus @ diag_v).conj()
    return sparse.csr_matrix(ds_dvm), sparse.csr_matrix(ds_dva)


def assemble_jacobian(
    ybus: sparse.csr_matrix, v: np.ndarray, pvpq: np.ndarray, pq: np.ndarray
) -> sparse.csr_matrix:
    ds_dvm, ds_dva = dsbus_dv(ybus, v)
    j11 = ds_dva[pvpq, :][:, pvpq].real
    if len(pq) == 0:
        return sparse.csr_matrix(j11)
    j12 = ds_dvm[pvpq, :][:, pq].real
    j21 = ds_dva[pq, :][:, pvpq].imag
    j22 = ds_dvm[pq, :][:, pq].imag
    return sparse.vstack(
        [sparse.hstack([j11, j12]), sparse.hstack([j21, j22])],
        format="csr",
    )


def _mismatch_vector(
    ybus: sparse.csr_matrix, v: np.ndarray, sbus: np.ndarray, pv: np.ndarray, pq: np.ndarray
) -> np.ndarray:
    mis = v * np.conj(ybus @ v) - sbus
    return np.r_[mis[pv].real, mis[pq].real, mis[pq].imag]


def _norm(f: np.ndarray) -> float:
    return float(np.max(np.abs(f))) if f.size else 0.0


def role_indices(case: GridCase, roles: BusRoles) -> tuple[np.ndarray, np.ndarray]:
    pv = np.array([case.position(b) for b in roles.pv], dtype=np.int64)
    pq = np.array([case.position(b) for b in roles.pq], dtype=np.int64)
    return pv, pq


def _newton(
    ybus: sparse.csr_matrix,
    sbus: np.ndarray,
    v0: np.ndarray,
    pv: np.ndarray,
    pq: np.ndarray,
    opts: SolveOptions,
) -> tuple[np.ndarray, int, float]:
    v = v0.copy()
    va = np.angle(v)
    vm = np.abs(v)
    pvpq = np.r_[pv, pq]
    npv, npq = len(pv), len(pq)

    f = _mismatch_vector(ybus, v, sbus, pv, pq)
    norm_f = _norm(f)
    iterations = 0
    if not np.isfinite(norm_f):
        raise Diverged(iterations=0, final_mismatch=norm_f)
    while norm_f >= opts.tol:
        if iterations >= opts.max_iter:
            raise Diverged(iterations=iterations, final_mismatch=norm_f)
        iterations += 1

        jac = assemble_jacobian(ybus, v, pvpq, pq)
        with warnings.catch_warnings():
            warnings.simplefilter("error", MatrixRankWarning)
            try:
                dx = -spsolve(jac.tocsc(), f)
            except MatrixRankWarning:
                raise SingularJacobian(f"Jacobian is singular at iteration {iterations}") from None
        dx = np.atleast_1d(dx)
        if not np.all(np.isfinite(dx)):
            raise SingularJacobian(f"non-finite Newton step at iteration {iterations}")

        if npv:
            va[pv] += dx[:npv]
        if npq:
            va[pq] += dx[npv : npv + npq]
            vm[pq] += dx[npv + npq :]
        v = vm * np.exp(1j * va)
        vm = np.abs(v)
        va = np.angle(v)

        f = _mismatch_vector(ybus, v, sbus, pv, pq)
        norm_f = _norm(f)
        if not np.isfinite(norm_f) or norm_f > DIVERGENCE_MISMATCH:
            raise Diverged(iterations=iterations, final_mismatch=norm_f)
        logger.debug("[powerflow] iteration %d max mismatch %.3e", iterations, norm_f)
    return v, iterations, norm_f


def _q_limit_violations(
    case: GridCase, roles: BusRoles, s: np.ndarray
) -> dict[int, float]:
    fixed: dict[int, float] = {}
    for bus_id in roles.pv:
        gens = case.generators_at(bus_id)
        q_min = sum(g.q_min for g in gens)
        q_max = sum(g.q_max for g in gens)
        q_gen = s[case.position(bus_id)].imag + case.bus(bus_id).q_load
        if q_gen > q_max:
            fixed[bus_id] = q_max
        elif q_gen < q_min:
            fixed[bus_id] = q_min
    return fixed


def run_power_flow(
    case: GridCase,
    opts: SolveOptions | None = None,
    start: Snapshot | None = None,
) -> PowerFlowResult:
    opts = opts or SolveOptions()
    y = build_ybus(case)
    ybus = y.matrix
    fixed_q: dict[int, float] = {}
    roles = bus_roles(case)
    v = _initial_voltages(case, roles, opts, start)
    total_iterations = 0

    for _ in range(Q_LIMIT_MAX_ROUNDS + 1):
        roles = bus_roles(case, frozenset(fixed_q))
        pv, pq = role_indices(case, roles)
        sbus = scheduled_injections(case, fixed_q)
        v, iterations, norm_f = _newton(ybus, sbus, v, pv, pq, opts)
        total_iterations += iterations
        if not opts.enforce_q_limits:
            break
        s = v * np.conj(ybus @ v)
        newly = _q_limit_violations(case, roles, s)
        if not newly:
            break
        for bus_id, limit in newly.items():
            logger.info("[powerflow] bus %d at Q limit %.4f pu, switching to PQ", bus_id, limit)
        fixed_q.update(newly)
    else:
        logger.warning("[powerflow] Q-limit switching did not settle in %d rounds", Q_LIMIT_MAX_ROUNDS)

    s = v * np.conj(ybus @ v)
    index = start.index if start is not None else 0
    snapshot = Snapshot(
        index=index,
        voltages={b: complex(v[i]) for i, b in enumerate(case.bus_ids)},
        injections={b: complex(s[i]) for i, b in enumerate(case.bus_ids)},
    )
    logger.debug(
        "[powerflow] converged in %d iterations (max mismatch %.3e)", total_iterations, norm_f
    )
    return PowerFlowResult(
        snapshot=snapshot,
        iterations=total_iterations,
        max_mismatch=norm_f,
        switched_to_pq=tuple(sorted(fixed_q)),
    )


def solve(case: GridCase, opts: SolveOptions | None = None) -> Snapshot:
    return run_power_flow(case, opts).snapshot


def mismatch(case: GridCase, snapshot: Snapshot) -> np.ndarray:
    """[dP(pv), dP(pq), dQ(pq)] of `snapshot` against the case's scheduled injections."""
    y = build_ybus(case)
    roles = bus_roles(case)
    pv, pq = role_indices(case, roles)
    v = voltage_vector(y, snapshot)
    return _mismatch_vector(y.matrix, v, scheduled_injections(case), pv, pq)
