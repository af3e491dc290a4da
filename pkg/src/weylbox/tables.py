"""Tabular results for the command line: CSV and JSON with a fixed schema."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

from .errors import DomainError

__all__ = ["Column", "SweepTable", "format_float"]

_TYPES = ("int", "float", "str", "bool")


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


@dataclass(frozen=True)
class Column:
    name: str
    type: str

    def __post_init__(self):
        if self.type not in _TYPES:
            raise DomainError(f"column type must be one of {_TYPES}, got {self.type!r}")


def _coerce(value, kind: str):
    if kind == "float":
        return math.nan if value is None else float(value)
    if kind == "int":
        return int(value)
    if kind == "bool":
        return bool(value)
    return str(value)


def _json_value(value, kind: str):
    # JSON has no nan/inf; encode those as null and strings respectively.
    if kind == "float":
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
    return value


def _from_json_value(value, kind: str):
    if kind == "float" and isinstance(value, str):
        return float(value)
    return _coerce(value, kind)


@dataclass
class SweepTable:
    """Ordered rows sharing one schema, plus free-form metadata.

    Every row carries every column.  Tables that compare an exact value
    with an asymptotic one store ``residual = exact - asymptotic`` as
    computed in floating point from the stored values.
    """

    columns: list[Column]
    rows: list[dict] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def with_schema(cls, *spec: tuple[str, str], meta=None) -> "SweepTable":
        return cls([Column(n, t) for n, t in spec], [], dict(meta or {}))

    @property
    def schema(self) -> list[str]:
        return [c.name for c in self.columns]

    def append(self, **values) -> None:
        missing = set(self.schema) - set(values)
        extra = set(values) - set(self.schema)
        if missing or extra:
            raise DomainError(f"row does not match schema (missing {sorted(missing)}, extra {sorted(extra)})")
        self.rows.append({c.name: _coerce(values[c.name], c.type) for c in self.columns})

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]

    def _cell(self, value, kind: str) -> str:
        if kind == "float":
            return format_float(value)
        if kind == "bool":
            return "true" if value else "false"
        return str(value)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.schema)
        for row in self.rows:
            writer.writerow([self._cell(row[c.name], c.type) for c in self.columns])
        return out.getvalue()

    def to_json(self) -> str:
        doc = {
            "schema": [{"name": c.name, "type": c.type} for c in self.columns],
            "rows": [{c.name: _json_value(row[c.name], c.type) for c in self.columns} for row in self.rows],
            "meta": _clean_meta(self.meta),
        }
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise DomainError(f"format must be 'csv' or 'json', got {fmt!r}")

    @classmethod
    def from_json(cls, text: str) -> "SweepTable":
        doc = json.loads(text)
        columns = [Column(c["name"], c["type"]) for c in doc["schema"]]
        table = cls(columns, [], doc.get("meta", {}))
        for raw in doc["rows"]:
            table.rows.append({c.name: _from_json_value(raw[c.name], c.type) for c in columns})
        return table

    @classmethod
    def from_csv(cls, text: str, types: dict[str, str]) -> "SweepTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        columns = [Column(n, types.get(n, "str")) for n in header]
        table = cls(columns)
        for raw in reader:
            row = {}
            for c, cell in zip(columns, raw):
                if c.type == "bool":
                    row[c.name] = cell == "true"
                else:
                    row[c.name] = _coerce(cell, c.type)
            table.rows.append(row)
        return table


def _clean_meta(value):
    if isinstance(value, float):
        return _json_value(value, "float")
    if isinstance(value, dict):
        return {str(k): _clean_meta(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean_meta(v) for v in value]
    return value
