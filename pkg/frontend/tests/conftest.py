"""Fixtures shared by the renderer tests."""

import json

import pytest

from table_fixtures import write_grid


@pytest.fixture
def grid_csv(tmp_path):
    return write_grid(tmp_path / "grid.csv")


@pytest.fixture
def single_axis_csv(tmp_path):
    return write_grid(tmp_path / "single.csv", axis_values=(20.0,),
                      times=(0.0, 0.5, 1.0, 1.5))


@pytest.fixture
def grid_with_sidecar(grid_csv):
    meta = {"preset": "demo", "note": "handcrafted fixture", "engine": "unitary"}
    grid_csv.with_name("grid.meta.json").write_text(json.dumps(meta))
    return grid_csv
