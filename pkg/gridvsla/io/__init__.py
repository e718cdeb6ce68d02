"""Case, snapshot and report file formats."""
from __future__ import annotations

from pathlib import Path

from gridvsla.core.errors import InputError
from gridvsla.grid.model import GridCase
from gridvsla.io.matpower import parse_matpower
from gridvsla.io.native_json import emit_native_json, parse_native_json
from gridvsla.io.snapshots import (
    SnapshotSeries,
    expand_snapshot_paths,
    read_snapshot_csv,
    read_snapshot_file,
    write_snapshot_csv,
)


def load_case(path: str | Path) -> GridCase:
    """Reads a `.m` (MATPOWER) or `.json` (native) case file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read case file {path}: {exc.strerror or exc}") from None
    suffix = path.suffix.lower()
    if suffix == ".m":
        return parse_matpower(text)
    if suffix == ".json":
        return parse_native_json(text)
    raise InputError(f"unknown case format {suffix or '<none>'!r} for {path} (expected .m or .json)")


__all__ = [
    "SnapshotSeries",
    "emit_native_json",
    "expand_snapshot_paths",
    "load_case",
    "parse_matpower",
    "parse_native_json",
    "read_snapshot_csv",
    "read_snapshot_file",
    "write_snapshot_csv",
]
