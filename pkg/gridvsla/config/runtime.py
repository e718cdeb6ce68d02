from __future__ import annotations

import argparse
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from gridvsla.config.settings import (
    ENFORCE_Q_LIMITS,
    HISTOGRAM_BINS,
    JOBS,
    LAMBDA_MAX,
    LAMBDA_MIN_STEP,
    LAMBDA_START,
    LAMBDA_STEP,
    LOG_LEVEL,
    PF_MAX_ITER,
    PF_TOLERANCE,
    SAMPLE_STD,
    Z_THRESHOLD,
)
from gridvsla.core.errors import UsageError

ENV_PREFIX = "GRIDVSLA_"


@dataclass(frozen=True)
class ConfigSpec:
    default: Any
    cast: Callable[[str], Any]
    description: str


CONFIG_SPECS: dict[str, ConfigSpec] = {
    "PF_TOLERANCE": ConfigSpec(
        default=float(PF_TOLERANCE),
        cast=float,
        description="Newton-Raphson convergence tolerance on max |mismatch| (per-unit).",
    ),
    "PF_MAX_ITER": ConfigSpec(
        default=int(PF_MAX_ITER),
        cast=int,
        description="Newton-Raphson iteration cap per solve.",
    ),
    "ENFORCE_Q_LIMITS": ConfigSpec(
        default=int(ENFORCE_Q_LIMITS),
        cast=int,
        description="1 to switch PV buses to PQ when generator Q limits bind; 0 to ignore limits.",
    ),
    "LAMBDA_START": ConfigSpec(
        default=float(LAMBDA_START),
        cast=float,
        description="First load/generation multiplier of a stress sweep.",
    ),
    "LAMBDA_STEP": ConfigSpec(
        default=float(LAMBDA_STEP),
        cast=float,
        description="Initial multiplier increment of a stress sweep.",
    ),
    "LAMBDA_MIN_STEP": ConfigSpec(
        default=float(LAMBDA_MIN_STEP),
        cast=float,
        description="Sweep terminates once the halved increment drops below this.",
    ),
    "LAMBDA_MAX": ConfigSpec(
        default=float(LAMBDA_MAX),
        cast=float,
        description="Upper bound on the sweep multiplier; the sweep stops there even if it still converges.",
    ),
    "Z_THRESHOLD": ConfigSpec(
        default=float(Z_THRESHOLD),
        cast=float,
        description="Buses whose critical-LCI z-score is <= this are selected as critical.",
    ),
    "SAMPLE_STD": ConfigSpec(
        default=int(SAMPLE_STD),
        cast=int,
        description="1 to use the 1/(N-1) standard deviation for z-scores; 0 for population.",
    ),
    "HISTOGRAM_BINS": ConfigSpec(
        default=int(HISTOGRAM_BINS),
        cast=int,
        description="Equal-width bin count for critical LCI histograms.",
    ),
    "JOBS": ConfigSpec(
        default=int(JOBS),
        cast=int,
        description="Scenario-level worker count.",
    ),
    "LOG_LEVEL": ConfigSpec(
        default=str(LOG_LEVEL),
        cast=str,
        description="Logging level for the stderr handler.",
    ),
}


def _normalize(name: str, value: Any) -> Any:
    if name == "PF_TOLERANCE":
        tol = float(value)
        return tol if tol > 0 else float(PF_TOLERANCE)
    if name == "PF_MAX_ITER":
        return max(1, int(value))
    if name in {"ENFORCE_Q_LIMITS", "SAMPLE_STD"}:
        return 1 if int(value) > 0 else 0
    if name == "LAMBDA_START":
        return max(0.0, float(value))
    if name in {"LAMBDA_STEP", "LAMBDA_MIN_STEP", "LAMBDA_MAX"}:
        step = float(value)
        return step if step > 0 else float(CONFIG_SPECS[name].default)
    if name == "Z_THRESHOLD":
        return float(value)
    if name in {"HISTOGRAM_BINS", "JOBS"}:
        return max(1, int(value))
    if name == "LOG_LEVEL":
        text = str(value).strip().upper()
        return text or str(LOG_LEVEL)
    return value


def get_config(name: str) -> Any:
    spec = CONFIG_SPECS.get(name)
    if spec is None:
        raise KeyError(f"Unknown config: {name}")
    raw = os.getenv(f"{ENV_PREFIX}{name}")
    if raw is None:
        return _normalize(name, spec.default)
    try:
        parsed = spec.cast(raw.strip())
    except (TypeError, ValueError):
        parsed = spec.default
    return _normalize(name, parsed)


def get_all_configs() -> list[dict[str, Any]]:
    rows: list[dict[str, Any]] = []
    for name, spec in CONFIG_SPECS.items():
        rows.append(
            {
                "name": name,
                "value": get_config(name),
                "default": _normalize(name, spec.default),
                "type": spec.cast.__name__,
                "description": spec.description,
            }
        )
    return rows


@dataclass(frozen=True)
class RunConfig:
    command: str
    case_path: Path
    snapshots_paths: tuple[Path, ...] = ()
    bus_filter: tuple[int, ...] | None = None
    lambda_start: float = LAMBDA_START
    step: float = LAMBDA_STEP
    min_step: float = LAMBDA_MIN_STEP
    lambda_max: float = LAMBDA_MAX
    z_threshold: float = Z_THRESHOLD
    tol: float = PF_TOLERANCE
    max_iter: int = PF_MAX_ITER
    output_path: Path | None = None
    format: str = "json"
    sample_std: bool = False
    enforce_q_limits: bool = False
    jobs: int = JOBS
    bins: int = HISTOGRAM_BINS
    histogram_path: Path | None = None
    z_histogram_path: Path | None = None
    jacobian: bool = False
    pv_trace: bool = False


def parse_bus_list(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    buses: list[int] = []
    for chunk in str(text).split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            bus = int(chunk)
        except ValueError as exc:
            raise UsageError(f"bad bus id in --buses: {chunk!r}") from exc
        if bus not in buses:
            buses.append(bus)
    if not buses:
        raise UsageError("--buses given but empty")
    return tuple(buses)


def build_run_config(args: argparse.Namespace) -> RunConfig:
    case_text = str(getattr(args, "case", "") or "").strip()
    if not case_text:
        raise UsageError("--case is required")
    command = str(args.command)
    snapshots = tuple(Path(p) for p in (getattr(args, "snapshots", None) or []))
    if command == "vsla" and not snapshots:
        raise UsageError("vsla needs at least one --snapshots file or directory")

    config = RunConfig(
        command=command,
        case_path=Path(case_text),
        snapshots_paths=snapshots,
        bus_filter=parse_bus_list(getattr(args, "buses", None)),
        lambda_start=float(getattr(args, "lambda_start", LAMBDA_START)),
        step=float(getattr(args, "step", LAMBDA_STEP)),
        min_step=float(getattr(args, "min_step", LAMBDA_MIN_STEP)),
        lambda_max=float(getattr(args, "lambda_max", LAMBDA_MAX)),
        z_threshold=float(getattr(args, "zmin", Z_THRESHOLD)),
        tol=float(getattr(args, "tol", PF_TOLERANCE)),
        max_iter=int(getattr(args, "max_iter", PF_MAX_ITER)),
        output_path=Path(args.out) if getattr(args, "out", None) else None,
        format=str(getattr(args, "format", "json")),
        sample_std=bool(getattr(args, "sample_std", False)),
        enforce_q_limits=bool(getattr(args, "enforce_q_limits", False)),
        jobs=int(getattr(args, "jobs", JOBS)),
        bins=int(getattr(args, "bins", HISTOGRAM_BINS)),
        histogram_path=Path(args.histogram) if getattr(args, "histogram", None) else None,
        z_histogram_path=Path(args.z_histogram) if getattr(args, "z_histogram", None) else None,
        jacobian=bool(getattr(args, "jacobian", False)),
        pv_trace=bool(getattr(args, "pv_trace", False)),
    )
    _check_run_config(config)
    return config


def _check_run_config(config: RunConfig) -> None:
    if config.tol <= 0:
        raise UsageError(f"--tol must be > 0, got {config.tol}")
    if config.max_iter < 1:
        raise UsageError(f"--max-iter must be >= 1, got {config.max_iter}")
    if config.format not in {"json", "csv"}:
        raise UsageError(f"--format must be json or csv, got {config.format!r}")
    if config.jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {config.jobs}")
    if config.bins < 1:
        raise UsageError(f"--bins must be >= 1, got {config.bins}")
    if config.command == "sweep":
        if config.lambda_start < 0:
            raise UsageError(f"--lambda-start must be >= 0, got {config.lambda_start}")
        if not (config.step > config.min_step > 0):
            raise UsageError(
                f"need step > min-step > 0, got step={config.step} min-step={config.min_step}"
            )
        if not config.lambda_max > config.lambda_start:
            raise UsageError(
                f"--lambda-max must exceed --lambda-start, got {config.lambda_max} <= {config.lambda_start}"
            )
