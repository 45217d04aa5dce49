"""Reading the simulator's CSV tables and their JSON metadata sidecars."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class PlotDataError(ValueError):
    """Input unusable for plotting."""


class EmptyTableError(PlotDataError):
    """CSV carries no data rows."""


class MissingColumnError(PlotDataError):
    """A referenced column is absent from the table."""


@dataclass(frozen=True)
class Table:
    """A sweep table: first column is the scanned axis, the rest observables."""

    columns: tuple
    data: np.ndarray

    @property
    def axis_name(self) -> str:
        return self.columns[0]

    def require(self, *names: str) -> None:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise MissingColumnError(
                f"missing columns {missing}; table has {list(self.columns)}")

    def column(self, name: str) -> np.ndarray:
        self.require(name)
        return self.data[:, self.columns.index(name)]


def read_table(path) -> Table:
    """Parse a delimited sweep file into a float table.

    Raises EmptyTableError when there are no data rows and PlotDataError for
    ragged or non-numeric content.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyTableError(f"{path}: file is empty") from None
        rows = list(reader)
    columns = tuple(name.strip() for name in header)
    if not rows:
        raise EmptyTableError(f"{path}: header only, no data rows")
    values = np.zeros((len(rows), len(columns)))
    for i, row in enumerate(rows, start=2):
        if len(row) != len(columns):
            raise PlotDataError(f"{path}: line {i} has {len(row)} cells, "
                                f"expected {len(columns)}")
        try:
            values[i - 2] = [float(cell) for cell in row]
        except ValueError:
            raise PlotDataError(f"{path}: line {i} has a non-numeric cell") from None
    return Table(columns=columns, data=values)


def sidecar_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + ".meta.json")


def load_metadata(csv_path) -> dict | None:
    """Metadata written next to the CSV, or None when the sidecar is absent."""
    side = sidecar_path(csv_path)
    if not side.exists():
        return None
    try:
        with open(side) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise PlotDataError(f"{side}: unreadable sidecar ({err})") from None
