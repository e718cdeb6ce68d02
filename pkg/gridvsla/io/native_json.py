"""Native JSON case format: keys mirror the GridCase field names; unknown keys are ignored."""
from __future__ import annotations

import json
import math
from typing import Any, Callable

from gridvsla.core.errors import SchemaError
from gridvsla.grid.model import Branch, Bus, BusKind, Generator, GridCase

_MISSING = object()


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {type(value).__name__}", path=path)
    return float(value)


def _integer(value: Any, path: str) -> int:
    number = _number(value, path)
    if not math.isfinite(number) or number != int(number):
        raise SchemaError(f"expected an integer, got {value!r}", path=path)
    return int(number)


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"expected true/false, got {value!r}", path=path)
    return value


def _kind(value: Any, path: str) -> BusKind:
    try:
        return BusKind(value)
    except ValueError:
        choices = ", ".join(k.value for k in BusKind)
        raise SchemaError(f"expected one of {choices}, got {value!r}", path=path) from None


def _field(
    obj: dict[str, Any],
    key: str,
    path: str,
    cast: Callable[[Any, str], Any],
    default: Any = _MISSING,
) -> Any:
    child = f"{path}.{key}"
    if key not in obj:
        if default is _MISSING:
            raise SchemaError("required key is missing", path=child)
        return default
    return cast(obj[key], child)


def _object(value: Any, path: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise SchemaError(f"expected an object, got {type(value).__name__}", path=path)
    return value


def _array(obj: dict[str, Any], key: str, path: str, *, required: bool) -> list[Any]:
    child = f"{path}.{key}"
    if key not in obj:
        if required:
            raise SchemaError("required key is missing", path=child)
        return []
    value = obj[key]
    if not isinstance(value, list):
        raise SchemaError(f"expected an array, got {type(value).__name__}", path=child)
    return value


def _bus(raw: Any, path: str) -> Bus:
    obj = _object(raw, path)
    return Bus(
        id=_field(obj, "id", path, _integer),
        kind=_field(obj, "kind", path, _kind),
        p_load=_field(obj, "p_load", path, _number, 0.0),
        q_load=_field(obj, "q_load", path, _number, 0.0),
        g_shunt=_field(obj, "g_shunt", path, _number, 0.0),
        b_shunt=_field(obj, "b_shunt", path, _number, 0.0),
        v_init_mag=_field(obj, "v_init_mag", path, _number, 1.0),
        v_init_ang=_field(obj, "v_init_ang", path, _number, 0.0),
        base_kv=_field(obj, "base_kv", path, _number, 0.0),
    )


def _branch(raw: Any, path: str) -> Branch:
    obj = _object(raw, path)
    return Branch(
        from_bus=_field(obj, "from_bus", path, _integer),
        to_bus=_field(obj, "to_bus", path, _integer),
        r=_field(obj, "r", path, _number),
        x=_field(obj, "x", path, _number),
        b_charging=_field(obj, "b_charging", path, _number, 0.0),
        tap=_field(obj, "tap", path, _number, 1.0),
        shift=_field(obj, "shift", path, _number, 0.0),
        in_service=_field(obj, "in_service", path, _boolean, True),
        is_transformer=_field(obj, "is_transformer", path, _boolean, False),
    )


def _generator(raw: Any, path: str) -> Generator:
    obj = _object(raw, path)
    return Generator(
        bus=_field(obj, "bus", path, _integer),
        p_gen=_field(obj, "p_gen", path, _number, 0.0),
        q_gen=_field(obj, "q_gen", path, _number, 0.0),
        v_setpoint=_field(obj, "v_setpoint", path, _number, 1.0),
        q_min=_field(obj, "q_min", path, _number, -math.inf),
        q_max=_field(obj, "q_max", path, _number, math.inf),
        in_service=_field(obj, "in_service", path, _boolean, True),
    )


def parse_native_json(text: str) -> GridCase:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})", path="$") from None
    root = _object(document, "$")
    base_mva = _field(root, "base_mva", "$", _number)
    buses = [_bus(item, f"$.buses[{i}]") for i, item in enumerate(_array(root, "buses", "$", required=True))]
    branches = [
        _branch(item, f"$.branches[{i}]")
        for i, item in enumerate(_array(root, "branches", "$", required=False))
    ]
    generators = [
        _generator(item, f"$.generators[{i}]")
        for i, item in enumerate(_array(root, "generators", "$", required=False))
    ]
    return GridCase(
        base_mva=base_mva,
        buses=tuple(buses),
        branches=tuple(branches),
        generators=tuple(generators),
    )


def case_to_dict(case: GridCase) -> dict[str, Any]:
    return {
        "base_mva": case.base_mva,
        "buses": [
            {
                "id": bus.id,
                "kind": bus.kind.value,
                "p_load": bus.p_load,
                "q_load": bus.q_load,
                "g_shunt": bus.g_shunt,
                "b_shunt": bus.b_shunt,
                "v_init_mag": bus.v_init_mag,
                "v_init_ang": bus.v_init_ang,
                "base_kv": bus.base_kv,
            }
            for bus in case.buses
        ],
        "branches": [
            {
                "from_bus": br.from_bus,
                "to_bus": br.to_bus,
                "r": br.r,
                "x": br.x,
                "b_charging": br.b_charging,
                "tap": br.tap,
                "shift": br.shift,
                "in_service": br.in_service,
                "is_transformer": br.is_transformer,
            }
            for br in case.branches
        ],
        "generators": [
            {
                "bus": gen.bus,
                "p_gen": gen.p_gen,
                "q_gen": gen.q_gen,
                "v_setpoint": gen.v_setpoint,
                "q_min": gen.q_min,
                "q_max": gen.q_max,
                "in_service": gen.in_service,
            }
            for gen in case.generators
        ],
    }


def emit_native_json(case: GridCase) -> str:
    # Infinite Q limits are written as the JSON extension tokens Infinity/-Infinity.
    return json.dumps(case_to_dict(case), indent=2) + "\n"
