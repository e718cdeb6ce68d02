"""Reader for the matrix-literal subset of MATPOWER case files.

Only `mpc.baseMVA`, `mpc.bus`, `mpc.gen` and `mpc.branch` are interpreted;
other assignments (`gencost`, `areas`, cell arrays, `version`) are skipped.
"""
from __future__ import annotations

import math
import re

from gridvsla.core.errors import CaseSyntaxError, SemanticError
from gridvsla.grid.model import Branch, Bus, BusKind, Generator, GridCase

_ASSIGN = re.compile(r"^\s*mpc\.(\w+)\s*=\s*(.*)$")
_TOKEN_SPLIT = re.compile(r"[\s,]+")

_BUS_TYPES = {1: BusKind.PQ, 2: BusKind.PV, 3: BusKind.SLACK}

# Column counts that must be present (MATPOWER may carry more).
_BUS_COLUMNS = 10
_GEN_COLUMNS = 8
_BRANCH_COLUMNS = 11

Row = tuple[int, str]


def _strip_comment(line: str) -> str:
    in_quote = False
    for i, ch in enumerate(line):
        if ch == "'":
            in_quote = not in_quote
        elif ch == "%" and not in_quote:
            return line[:i]
    return line


def _parse_row(piece: str, line: int) -> list[float]:
    values: list[float] = []
    for token in _TOKEN_SPLIT.split(piece.strip()):
        if not token or token == "...":
            continue
        try:
            values.append(float(token))
        except ValueError:
            raise CaseSyntaxError(f"bad number {token!r}", line=line) from None
    return values


def _scan(text: str) -> tuple[dict[str, tuple[int, str]], dict[str, list[Row]]]:
    scalars: dict[str, tuple[int, str]] = {}
    matrices: dict[str, list[Row]] = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        content = _strip_comment(lines[i]).strip()
        i += 1
        match = _ASSIGN.match(content)
        if match is None:
            continue
        name, rest = match.group(1), match.group(2).strip()

        if rest.startswith("[") or rest.startswith("{"):
            closer = "]" if rest.startswith("[") else "}"
            start_line = lineno
            rows: list[Row] = []
            body = rest[1:]
            while True:
                close = body.find(closer)
                segment = body if close < 0 else body[:close]
                for piece in segment.split(";"):
                    if piece.strip():
                        rows.append((lineno, piece))
                if close >= 0:
                    break
                if i >= len(lines):
                    raise CaseSyntaxError(f"unterminated mpc.{name}", line=start_line)
                lineno = i + 1
                body = _strip_comment(lines[i])
                i += 1
            if closer == "]":
                matrices[name] = rows
            continue

        scalars[name] = (lineno, rest.rstrip(";").strip())
    return scalars, matrices


def _matrix(matrices: dict[str, list[Row]], name: str, width: int) -> list[tuple[int, list[float]]]:
    if name not in matrices:
        raise SemanticError(f"case has no mpc.{name} matrix")
    parsed = []
    for line, piece in matrices[name]:
        values = _parse_row(piece, line)
        if len(values) < width:
            raise CaseSyntaxError(
                f"mpc.{name} row has {len(values)} columns, need at least {width}", line=line
            )
        parsed.append((line, values))
    return parsed


def _as_id(value: float, line: int, what: str) -> int:
    if not math.isfinite(value) or value != int(value):
        raise CaseSyntaxError(f"{what} must be an integer, got {value}", line=line)
    return int(value)


def parse_matpower(text: str) -> GridCase:
    scalars, matrices = _scan(text)
    if "baseMVA" not in scalars:
        raise SemanticError("case has no mpc.baseMVA")
    base_line, base_text = scalars["baseMVA"]
    try:
        base_mva = float(base_text)
    except ValueError:
        raise CaseSyntaxError(f"bad baseMVA {base_text!r}", line=base_line) from None

    buses: list[Bus] = []
    for line, row in _matrix(matrices, "bus", _BUS_COLUMNS):
        type_code = _as_id(row[1], line, "BUS_TYPE")
        kind = _BUS_TYPES.get(type_code)
        if kind is None:
            raise SemanticError(f"line {line}: bad bus type code {type_code}")
        buses.append(
            Bus(
                id=_as_id(row[0], line, "BUS_I"),
                kind=kind,
                p_load=row[2] / base_mva,
                q_load=row[3] / base_mva,
                g_shunt=row[4] / base_mva,
                b_shunt=row[5] / base_mva,
                v_init_mag=row[7],
                v_init_ang=math.radians(row[8]),
                base_kv=row[9],
            )
        )

    generators: list[Generator] = []
    for line, row in _matrix(matrices, "gen", _GEN_COLUMNS):
        generators.append(
            Generator(
                bus=_as_id(row[0], line, "GEN_BUS"),
                p_gen=row[1] / base_mva,
                q_gen=row[2] / base_mva,
                q_max=row[3] / base_mva,
                q_min=row[4] / base_mva,
                v_setpoint=row[5],
                in_service=row[7] > 0,
            )
        )

    branches: list[Branch] = []
    for line, row in _matrix(matrices, "branch", _BRANCH_COLUMNS):
        raw_tap, raw_shift = row[8], row[9]
        branches.append(
            Branch(
                from_bus=_as_id(row[0], line, "F_BUS"),
                to_bus=_as_id(row[1], line, "T_BUS"),
                r=row[2],
                x=row[3],
                b_charging=row[4],
                tap=1.0 if raw_tap == 0 else raw_tap,
                shift=math.radians(raw_shift),
                in_service=row[10] > 0,
                is_transformer=raw_tap != 0 or raw_shift != 0,
            )
        )

    return GridCase(
        base_mva=base_mva,
        buses=tuple(buses),
        branches=tuple(branches),
        generators=tuple(generators),
    )
