"""Heatmaps and line plots from sweep tables.

A heatmap shows concurrence over (time, axis) on a fixed [0, 1] color scale; a
line plot shows chosen observable columns against time, one curve per axis
value.  Validation happens before any drawing, so failures never leave a
partial image behind.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import PlotDataError, Table, load_metadata, read_table

KINDS = ("heatmap", "lines")
IMAGE_SUFFIXES = (".png", ".svg")
MAX_LEGEND_ENTRIES = 12

AXIS_LABELS = {
    "gt": "gt",
    "J_over_g": "J/g",
    "delta_over_g": "delta/g",
    "n_bar": "thermal occupation",
    "kappa_over_g": "kappa/g",
    "gamma_over_g": "gamma/g",
    "C_kg": "cooperative parameter",
    "concurrence": "concurrence",
    "inversion": "population inversion",
    "mean_photon_1": "cavity-1 photon number",
    "mean_photon_2": "cavity-2 photon number",
    "retained_thermal_mass": "retained thermal mass",
}

LINE_STYLES = {
    "concurrence": {"linestyle": "-", "color": "tab:blue"},
    "inversion": {"linestyle": "--", "color": "tab:red"},
    "mean_photon_1": {"linestyle": "-", "color": "black"},
    "mean_photon_2": {"linestyle": "-", "color": "0.45"},
    "retained_thermal_mass": {"linestyle": ":", "color": "0.3"},
}

# stable element ids so identical inputs produce byte-identical SVG output
matplotlib.rcParams["svg.hashsalt"] = "cavitypair-plots"


@dataclass(frozen=True)
class PlotJob:
    """One CSV in, one image out."""

    source: str
    kind: str
    output: str
    series: tuple = ("concurrence",)
    title: str | None = None
    x_label: str | None = None
    y_label: str | None = None
    cmap: str = "viridis"
    dpi: int = 150


def _label(name: str) -> str:
    return AXIS_LABELS.get(name, name)


def table_grid(table: Table) -> tuple[np.ndarray, np.ndarray]:
    """(time values, axis values) of a full axis-major grid.

    The writer emits one block of time samples per axis value; anything else
    (missing rows, shuffled order) is rejected rather than resampled.
    """
    table.require("gt")
    axis = table.column(table.axis_name)
    gt = table.column("gt")
    axis_values = np.unique(axis)
    gt_values = np.unique(gt)
    n_rows = table.data.shape[0]
    if axis_values.size * gt_values.size != n_rows:
        raise PlotDataError("rows do not form a full (axis x time) grid")
    a2 = axis.reshape(axis_values.size, gt_values.size)
    g2 = gt.reshape(axis_values.size, gt_values.size)
    if not (np.all(a2 == a2[:, :1]) and np.all(g2 == gt_values)):
        raise PlotDataError("rows are not in axis-major order")
    return gt_values, a2[:, 0]


def render_heatmap(ax, table: Table, cmap: str = "viridis"):
    """Concurrence over (gt, axis) with the color scale pinned to [0, 1]."""
    table.require("concurrence")
    gt_values, axis_values = table_grid(table)
    z = table.column("concurrence").reshape(axis_values.size, gt_values.size)
    mesh = ax.pcolormesh(gt_values, axis_values, z, cmap=cmap,
                         vmin=0.0, vmax=1.0, shading="nearest")
    ax.set_xlabel(_label("gt"))
    ax.set_ylabel(_label(table.axis_name))
    return mesh


def render_lines(ax, table: Table, series: tuple = ("concurrence",)):
    """One curve per (series column, axis value) against time."""
    if not series:
        raise PlotDataError("no series columns requested")
    table.require(*series)
    gt_values, axis_values = table_grid(table)
    lines = []
    for name in series:
        blocks = table.column(name).reshape(axis_values.size, gt_values.size)
        style = LINE_STYLES.get(name, {"linestyle": "-"})
        for value, block in zip(axis_values, blocks):
            label = _label(name)
            if axis_values.size > 1:
                label = f"{label}, {_label(table.axis_name)}={value:g}"
            lines.extend(ax.plot(gt_values, block, label=label, **style))
    ax.set_xlabel(_label("gt"))
    # a legend with one entry per axis value stops being readable quickly,
    # and past a few dozen entries it squeezes the axes to nothing
    if len(lines) <= MAX_LEGEND_ENTRIES:
        ax.legend(loc="best", fontsize="small")
    return lines


def default_title(meta: dict | None) -> str | None:
    if not meta:
        return None
    preset = meta.get("preset")
    note = meta.get("note")
    if preset and note:
        return f"{preset}: {note}"
    return preset or note


def render(job: PlotJob) -> Path:
    """Validate, draw and write one image; returns the output path."""
    if job.kind not in KINDS:
        raise PlotDataError(f"unknown kind {job.kind!r}; expected one of {KINDS}")
    output = Path(job.output)
    if output.suffix.lower() not in IMAGE_SUFFIXES:
        raise PlotDataError(f"output must end in one of {IMAGE_SUFFIXES}")
    table = read_table(job.source)
    meta = load_metadata(job.source)

    fig, ax = plt.subplots(figsize=(6.4, 4.2), layout="constrained")
    try:
        if job.kind == "heatmap":
            mesh = render_heatmap(ax, table, cmap=job.cmap)
            fig.colorbar(mesh, ax=ax, label=_label("concurrence"))
        else:
            render_lines(ax, table, series=job.series)
        if job.x_label:
            ax.set_xlabel(job.x_label)
        if job.y_label:
            ax.set_ylabel(job.y_label)
        title = job.title or default_title(meta)
        if title:
            ax.set_title(title, fontsize="medium")
        save_args = {"dpi": job.dpi}
        if output.suffix.lower() == ".svg":
            save_args["metadata"] = {"Date": None}  # drop the embedded timestamp
        fig.savefig(output, **save_args)
    finally:
        plt.close(fig)
    return output
