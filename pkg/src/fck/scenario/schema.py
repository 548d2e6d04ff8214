"""Declarative config schemas for archetypes.

Each archetype lists its :class:`Field` objects; :func:`coerce` turns raw
values (strings from XML, or Python values) into a validated dict, and
reports every problem with a path to the offending field.

Raw scalars may be ``(text, unit)`` pairs; units are converted to the
canonical ones (kg, months, MWe).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

REQUIRED = object()

UNITS: dict[str, dict[str, float]] = {
    "mass": {"kg": 1.0, "g": 1e-3, "t": 1e3, "mt": 1e3, "mthm": 1e3, "tonne": 1e3, "tonnes": 1e3},
    "time": {"month": 1.0, "months": 1.0, "year": 12.0, "years": 12.0, "y": 12.0},
    "power": {"mwe": 1.0, "gwe": 1e3, "kwe": 1e-3},
}

# value kinds that name something defined elsewhere in a scenario
REFERENCE_TYPES = ("recipe", "prototype")
SCALAR_TYPES = ("str", "int", "float", "bool", "commodity", "nuclide") + REFERENCE_TYPES


class SchemaError(ValueError):
    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Field:
    name: str
    type: str = "float"
    default: Any = REQUIRED
    many: bool = False
    units: str | None = None
    min: float | None = None
    max: float | None = None
    choices: tuple | None = None
    fields: tuple["Field", ...] = ()
    doc: str = ""

    def __post_init__(self):
        if self.type != "nested" and self.type not in SCALAR_TYPES:
            raise ValueError(f"field {self.name}: unknown type {self.type!r}")
        if self.type == "nested" and not self.fields:
            raise ValueError(f"field {self.name}: nested field needs sub-fields")
        if self.units is not None and self.units not in UNITS:
            raise ValueError(f"field {self.name}: unknown unit kind {self.units!r}")

    @property
    def required(self) -> bool:
        return self.default is REQUIRED


@dataclass
class References:
    """Names a config refers to, collected for cross-checking."""

    recipes: list[tuple[str, str]] = field(default_factory=list)  # (path, name)
    prototypes: list[tuple[str, str]] = field(default_factory=list)
    commodities: list[tuple[str, str]] = field(default_factory=list)


def _convert_units(value: float, unit: str | None, f: Field, path: str, errors: list[str]) -> float:
    if unit is None:
        return value
    if f.units is None:
        errors.append(f"{path}: field takes no units, got {unit!r}")
        return value
    factor = UNITS[f.units].get(unit.strip().lower())
    if factor is None:
        errors.append(f"{path}: unknown {f.units} unit {unit!r} "
                      f"(expected one of {', '.join(sorted(UNITS[f.units]))})")
        return value
    return value * factor


def _scalar(raw: Any, f: Field, path: str, errors: list[str], refs: References) -> Any:
    unit = None
    if isinstance(raw, tuple):
        raw, unit = raw
    kind = f.type
    try:
        if kind == "bool":
            if isinstance(raw, bool):
                value = raw
            elif str(raw).strip().lower() in ("true", "1", "yes"):
                value = True
            elif str(raw).strip().lower() in ("false", "0", "no"):
                value = False
            else:
                raise ValueError(raw)
        elif kind == "int":
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError(raw)
            value = int(str(raw).strip()) if isinstance(raw, str) else int(raw)
            if unit is not None:
                converted = _convert_units(float(value), unit, f, path, errors)
                if not float(converted).is_integer():
                    errors.append(f"{path}: {raw!r} {unit} is not a whole number of base units")
                value = int(converted)
        elif kind == "float":
            value = float(str(raw).strip()) if isinstance(raw, str) else float(raw)
            if math.isnan(value):
                raise ValueError(raw)
            value = _convert_units(value, unit, f, path, errors)
        else:
            value = str(raw).strip()
            if not value:
                errors.append(f"{path}: empty {kind} name")
                return None
    except (TypeError, ValueError):
        errors.append(f"{path}: expected {kind}, got {raw!r}")
        return None
    if kind in ("int", "float"):
        if f.min is not None and value < f.min:
            errors.append(f"{path}: {value!r} below minimum {f.min!r}")
        if f.max is not None and value > f.max:
            errors.append(f"{path}: {value!r} above maximum {f.max!r}")
    if f.choices is not None and value not in f.choices:
        errors.append(f"{path}: {value!r} not one of {list(f.choices)!r}")
    if kind == "recipe":
        refs.recipes.append((path, value))
    elif kind == "prototype":
        refs.prototypes.append((path, value))
    elif kind == "commodity":
        refs.commodities.append((path, value))
    elif kind == "nuclide":
        from fck.resources.nuclides import NuclideError, nucid
        try:
            value = nucid(value)
        except NuclideError as exc:
            errors.append(f"{path}: {exc}")
            return None
    return value


def _one(raw: Any, f: Field, path: str, errors: list[str], refs: References) -> Any:
    if f.type == "nested":
        if not isinstance(raw, Mapping):
            errors.append(f"{path}: expected a block of fields")
            return None
        return _coerce(f.fields, raw, path, errors, refs)
    return _scalar(raw, f, path, errors, refs)


def _coerce(fields: Sequence[Field], raw: Mapping, path: str, errors: list[str],
            refs: References) -> dict:
    known = {f.name for f in fields}
    for key in raw:
        if key not in known:
            errors.append(f"{path}/{key}: unknown field")
    out: dict[str, Any] = {}
    for f in fields:
        sub = f"{path}/{f.name}"
        if f.name not in raw or raw[f.name] is None:
            if f.required:
                errors.append(f"{sub}: required field missing")
                continue
            out[f.name] = list(f.default) if f.many else f.default
            continue
        value = raw[f.name]
        if f.many:
            if isinstance(value, (str, bytes, Mapping, tuple)) or not isinstance(value, Sequence):
                value = [value]
            out[f.name] = [_one(v, f, f"{sub}[{i}]", errors, refs) for i, v in enumerate(value)]
        else:
            out[f.name] = _one(value, f, sub, errors, refs)
    return out


def coerce(fields: Sequence[Field], raw: Mapping, path: str = "config",
           refs: References | None = None) -> dict:
    """Validate ``raw`` against ``fields``; raises :class:`SchemaError` listing every problem."""
    errors: list[str] = []
    out = _coerce(fields, raw, path, errors, refs if refs is not None else References())
    if errors:
        raise SchemaError(errors)
    return out


def check(fields: Sequence[Field], raw: Mapping, path: str, errors: list[str],
          refs: References) -> dict:
    """Like :func:`coerce` but appends problems to ``errors`` instead of raising."""
    return _coerce(fields, raw, path, errors, refs)
