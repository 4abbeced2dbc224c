import csv
import hashlib
import importlib.metadata
import io
import json
import math
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator  # pyright: ignore [reportUnknownVariableType]

from strauss.core.domain.errors import DataError
from strauss.core.domain.graphon import FloatArray


def tool_version() -> str:
    try:
        return importlib.metadata.version("strauss")
    except importlib.metadata.PackageNotFoundError:
        return "0.0.0+local"


def config_hash(config: dict[str, Any]) -> str:
    """12 hex digits of the sha256 of the canonical JSON of a configuration"""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def format_number(value: float) -> str:
    if math.isnan(value):
        return "nan"
    return format(value, ".17g")


class SweepTable(BaseModel):
    """Ordered rows of named real columns, with the metadata needed to reproduce them.

    Rows whose solve failed are kept as NaN rows so the sweep order is preserved."""

    kind: str
    columns: list[str]
    rows: list[list[float]] = Field(default_factory=list)
    metadata: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _validate(self):
        if len(set(self.columns)) != len(self.columns):
            raise DataError("Duplicate column names", columns=self.columns)
        for row in self.rows:
            if len(row) != len(self.columns):
                raise DataError(f"Row has {len(row)} values for {len(self.columns)} columns")
        return self

    @classmethod
    def create(cls, kind: str, columns: list[str], config: Optional[dict[str, Any]] = None) -> "SweepTable":
        config = config or {}
        metadata = {
            "kind": kind,
            "version": tool_version(),
            "config_hash": config_hash({"kind": kind, **config}),
        }
        metadata.update({k: json.dumps(v, sort_keys=True, default=str) for k, v in sorted(config.items())})
        return cls(kind=kind, columns=columns, metadata=metadata)

    def __len__(self) -> int:
        return len(self.rows)

    def append(self, **values: float) -> None:
        missing = set(self.columns) - set(values)
        extra = set(values) - set(self.columns)
        if missing or extra:
            raise DataError("Row does not match the table columns", missing=sorted(missing), extra=sorted(extra))
        self.rows.append([float(values[c]) for c in self.columns])

    def append_gap(self, **values: float) -> None:
        """Record a failed solve: the given values (usually the sweep parameter) and NaN elsewhere"""
        self.append(**{c: values.get(c, math.nan) for c in self.columns})

    def column(self, name: str) -> FloatArray:
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise DataError(f"Unknown column {name}", columns=self.columns) from None
        return np.asarray([row[idx] for row in self.rows], dtype=np.float64)

    def row_dict(self, i: int) -> dict[str, float]:
        return dict(zip(self.columns, self.rows[i]))

    def gap_count(self) -> int:
        """Rows recorded by append_gap, where only the leading parameter column holds a value.

        NaN in a row that has other values is a value (no candidate, no crossing) and not a gap."""
        return sum(all(math.isnan(v) for v in row[1:]) for row in self.rows)

    def complete_rows(self) -> "SweepTable":
        """A copy without the rows that hold any NaN"""
        return self.model_copy(update={"rows": [r for r in self.rows if not any(math.isnan(v) for v in r)]})

    def to_csv(self) -> str:
        out = io.StringIO()
        for key, value in self.metadata.items():
            out.write(f"# {key}: {value}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_number(v) for v in row])
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        metadata: dict[str, str] = {}
        body: list[str] = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(":")
                metadata[key.strip()] = value.strip()
            elif line.strip():
                body.append(line)
        if not body:
            raise DataError("CSV table has no header row")

        reader = csv.reader(body)
        columns = next(reader)
        try:
            rows = [[float(v) for v in row] for row in reader]
        except ValueError as e:
            raise DataError(f"Non-numeric value in table: {e}") from e
        return cls(kind=metadata.get("kind", "unknown"), columns=columns, rows=rows, metadata=metadata)

    def to_json(self) -> str:
        payload = {
            "kind": self.kind,
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": [[None if math.isnan(v) else v for v in row] for row in self.rows],
        }
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SweepTable":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise DataError(f"Invalid table JSON: {e}") from e
        payload["rows"] = [[math.nan if v is None else v for v in row] for row in payload.get("rows", [])]
        return cls.model_validate(payload)
