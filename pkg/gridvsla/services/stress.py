"""Quasi-static stressing: proportional load/generation scaling up to power-flow divergence."""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from gridvsla.config.settings import LAMBDA_MAX
from gridvsla.core.errors import BaseCaseDiverged, InputError, NumericalError, UsageError
from gridvsla.grid.model import GridCase, Snapshot
from gridvsla.grid.ybus import build_ybus
from gridvsla.services.jacobian import sigma_min
from gridvsla.services.lci import LciValue, bus_lci_table
from gridvsla.services.powerflow import SolveOptions, run_power_flow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepResult:
    points: tuple[tuple[float, Snapshot], ...]
    lambda_max: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        lambdas = self.lambdas
        if any(b <= a for a, b in zip(lambdas, lambdas[1:])):
            raise ValueError("sweep multipliers must be strictly increasing")

    @property
    def lambdas(self) -> tuple[float, ...]:
        return tuple(lam for lam, _ in self.points)

    @property
    def last(self) -> Snapshot:
        return self.points[-1][1]


def scale_case(case: GridCase, lam: float) -> GridCase:
    """Loads (P and Q, constant power factor) and generator P times `lam`; the slack absorbs the rest."""
    if lam < 0:
        raise UsageError(f"lambda must be >= 0, got {lam}")
    return replace(
        case,
        buses=tuple(replace(b, p_load=b.p_load * lam, q_load=b.q_load * lam) for b in case.buses),
        generators=tuple(replace(g, p_gen=g.p_gen * lam) for g in case.generators),
    )


def total_load_mw(case: GridCase) -> float:
    return sum(bus.p_load for bus in case.buses) * case.base_mva


def _has_stress(case: GridCase) -> bool:
    loads = any(bus.p_load or bus.q_load for bus in case.buses)
    return loads or any(gen.p_gen for gen in case.generators if gen.in_service)


def stress_sweep(
    case: GridCase,
    lambda_start: float,
    step: float,
    min_step: float,
    opts: SolveOptions | None = None,
    lambda_max: float = LAMBDA_MAX,
) -> SweepResult:
    """Raise lambda from `lambda_start` until the power flow fails and the halved step
    drops below `min_step`, or until `lambda_max` is reached."""
    if not step > min_step > 0:
        raise UsageError(f"need step > min_step > 0, got step={step} min_step={min_step}")
    if not lambda_max > lambda_start:
        raise UsageError(f"need lambda_max > lambda_start, got {lambda_max} <= {lambda_start}")
    if not _has_stress(case):
        raise InputError("case has no load or generator output to scale")
    opts = opts or SolveOptions()

    try:
        first = run_power_flow(scale_case(case, lambda_start), opts)
    except NumericalError as exc:
        raise BaseCaseDiverged(f"base point lambda={lambda_start:g} failed: {exc}") from exc

    lam = lambda_start
    previous = replace(first.snapshot, index=0, time=lam)
    points: list[tuple[float, Snapshot]] = [(lam, previous)]

    while step >= min_step and lam < lambda_max:
        trial = min(lam + step, lambda_max)
        try:
            result = run_power_flow(scale_case(case, trial), opts, start=previous)
        except NumericalError as exc:
            logger.debug("[stress] lambda=%.6g failed (%s), step %.3g", trial, exc, step / 2)
            step /= 2
            continue
        lam = trial
        previous = replace(result.snapshot, index=len(points), time=lam)
        points.append((lam, previous))
        logger.debug("[stress] lambda=%.6g converged in %d iterations", lam, result.iterations)

    if lam >= lambda_max:
        logger.warning("[stress] reached lambda cap %.6g with the power flow still converging", lambda_max)
    logger.info("[stress] lambda_max=%.6g after %d converged points", lam, len(points))
    return SweepResult(points=tuple(points), lambda_max=lam)


@dataclass(frozen=True)
class SweepRow:
    lam: float
    total_load_mw: float
    lci: dict[int, LciValue]
    sigma_min: float | None = None


def sweep_lci_table(
    case: GridCase,
    sweep: SweepResult,
    buses: tuple[int, ...],
    *,
    with_jacobian: bool = False,
) -> list[SweepRow]:
    """Per converged point: multiplier, total load and LCI at each bus of interest.

    The Y-bus does not depend on the multiplier, so one matrix and one no-load
    table serve the whole sweep.
    """
    y = build_ybus(case)
    no_load: dict[int, float] = {}
    rows: list[SweepRow] = []
    for lam, snapshot in sweep.points:
        scaled = scale_case(case, lam)
        sigma = sigma_min(scaled, snapshot) if with_jacobian else None
        rows.append(
            SweepRow(
                lam=lam,
                total_load_mw=total_load_mw(scaled),
                lci=bus_lci_table(y, snapshot, buses, no_load_cache=no_load),
                sigma_min=sigma,
            )
        )
    return rows


def critical_bus(row: SweepRow) -> tuple[int, float]:
    """Lowest LCI in the row; ties go to the lowest bus id."""
    bus_id = min(row.lci, key=lambda b: (row.lci[b].lci, b))
    return bus_id, row.lci[bus_id].lci
