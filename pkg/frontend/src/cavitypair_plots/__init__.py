"""Rendering of cavitypair sweep CSVs to heatmap and line-plot images."""

from .io import (
    EmptyTableError,
    MissingColumnError,
    PlotDataError,
    Table,
    load_metadata,
    read_table,
    sidecar_path,
)
from .render import (
    KINDS,
    PlotJob,
    render,
    render_heatmap,
    render_lines,
    table_grid,
)

__version__ = "0.1.0"

__all__ = [
    "EmptyTableError",
    "KINDS",
    "MissingColumnError",
    "PlotDataError",
    "PlotJob",
    "Table",
    "load_metadata",
    "read_table",
    "render",
    "render_heatmap",
    "render_lines",
    "sidecar_path",
    "table_grid",
    "__version__",
]
