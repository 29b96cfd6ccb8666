"""CSV tables for experiment series.

Files are UTF-8 with a ``# schema=<version> table=<name>`` line followed by
the header row; the header is written even for empty tables.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from phongfield.core.constants import CSV_SCHEMA_VERSION
from phongfield.core.exceptions import ParameterError
from phongfield.repositories.base import BaseFileRepository


@dataclass
class CsvTable:
    """Named columns with row-major values."""

    name: str
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    schema_version: str = CSV_SCHEMA_VERSION

    def append(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ParameterError(
                f"table {self.name} has {len(self.columns)} columns, got {len(values)} values"
            )
        self.rows.append(list(values))

    def column(self, name: str) -> list[Any]:
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    @classmethod
    def from_columns(cls, name: str, **columns: Sequence[Any]) -> "CsvTable":
        """Build a table from equally long column sequences."""
        lengths = {len(v) for v in columns.values()}
        if len(lengths) > 1:
            raise ParameterError(f"table {name}: columns differ in length", lengths=sorted(lengths))
        return cls(name=name, columns=list(columns), rows=[list(r) for r in zip(*columns.values())])


def _cell(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


class CsvRepository(BaseFileRepository[CsvTable]):
    suffix = ".csv"

    def _write(self, obj: CsvTable, path: Path) -> None:
        with path.open("w", encoding="utf-8", newline="") as f:
            f.write(f"# schema={obj.schema_version} table={obj.name}\n")
            writer = csv.writer(f)
            writer.writerow(obj.columns)
            for row in obj.rows:
                writer.writerow([_cell(v) for v in row])

    def _read(self, path: Path) -> CsvTable:
        """Values are returned as strings."""
        with path.open("r", encoding="utf-8", newline="") as f:
            first = f.readline()
            meta = dict(
                item.split("=", 1) for item in first.lstrip("#").split() if "=" in item
            )
            reader = csv.reader(f)
            header = next(reader, None)
            if not header:
                raise ParameterError(f"{path.name} has no header row")
            rows = [row for row in reader if row]
        return CsvTable(
            name=meta.get("table", path.stem),
            columns=header,
            rows=rows,
            schema_version=meta.get("schema", ""),
        )


csv_repository = CsvRepository()
