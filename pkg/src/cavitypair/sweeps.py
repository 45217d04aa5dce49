"""Parameter sweeps over a time grid, canonical figure presets, and CSV output.

A sweep scans one axis quantity (hopping, detuning, occupation, damping or the
cooperative parameter) and records, for every (axis value, time) pair, the
concurrence, population inversion, per-cavity mean photon number and the
thermal probability mass retained by the truncation.  Output is deterministic:
fixed column order, 12 significant digits, LF line endings, and results are
assembled in axis order regardless of how many workers computed them.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from .entanglement import concurrence, population_inversion
from .evolution import TimeGrid, reduced_atomic_density
from .hilbert import cutoff_for
from .lindblad import (
    DissipationParams,
    FullSpace,
    integrate_master_equation,
    rates_from_cooperative,
    thermal_product_state,
)
from .model import ModelParams
from .states import ThermalSpec, atomic_state

WORKERS_ENV = "CAVITYPAIR_WORKERS"

ENGINES = ("unitary", "lindblad")

RESULT_COLUMNS = ("gt", "concurrence", "inversion", "mean_photon_1",
                  "mean_photon_2", "retained_thermal_mass")


class ConfigError(ValueError):
    """Bad sweep configuration."""


@dataclass(frozen=True)
class PointSpec:
    """One parameter point, everything in units of the reference coupling g."""

    initial_state: str = "e1g2"
    delta_over_g: float = 0.0
    J_over_g: float = 0.0
    n_bar: float = 0.0
    g1_over_g: float = 1.0
    g2_over_g: float = 1.0
    kappa_over_g: float = 0.0
    gamma_over_g: float = 0.0
    cutoff_override: int | None = None

    def model_params(self) -> ModelParams:
        return ModelParams(
            g1=self.g1_over_g, g2=self.g2_over_g,
            delta1=self.delta_over_g, delta2=self.delta_over_g,
            J=self.J_over_g, n_bar1=self.n_bar, n_bar2=self.n_bar,
        )

    def cutoff(self) -> int:
        if self.cutoff_override is not None:
            if self.cutoff_override < 0:
                raise ConfigError("cutoff_override must be nonnegative")
            return int(self.cutoff_override)
        return cutoff_for(self.n_bar)


@dataclass
class PointSeries:
    """Observables along the time grid for one parameter point."""

    concurrence: np.ndarray
    inversion: np.ndarray
    mean_photon_1: np.ndarray
    mean_photon_2: np.ndarray
    retained_mass: float


def run_point(point: PointSpec, grid: TimeGrid, engine: str = "unitary") -> PointSeries:
    """Time series of the standard observables at a single parameter point."""
    if engine not in ENGINES:
        raise ConfigError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    dissipative = point.kappa_over_g > 0.0 or point.gamma_over_g > 0.0
    if dissipative and engine != "lindblad":
        raise ConfigError("nonzero kappa or gamma requires engine = lindblad")
    atoms = atomic_state(point.initial_state)
    params = point.model_params()
    cut = point.cutoff()

    if engine == "unitary":
        out = reduced_atomic_density(params, atoms, grid, cutoff1=cut, cutoff2=cut)
        return PointSeries(
            concurrence=out.concurrence(),
            inversion=out.inversion(),
            mean_photon_1=out.mean_photon1,
            mean_photon_2=out.mean_photon2,
            retained_mass=out.retained_mass,
        )

    space = FullSpace(cut, cut)
    diss = DissipationParams(kappa=point.kappa_over_g, gamma=point.gamma_over_g,
                             n_bar=point.n_bar)
    spec = ThermalSpec(point.n_bar, cut)
    rho0, mass = thermal_product_state(atoms, spec, spec, space)
    result = integrate_master_equation(params, diss, rho0, grid, space)
    return PointSeries(
        concurrence=np.array([concurrence(r) for r in result.rho_atoms]),
        inversion=np.array([population_inversion(r) for r in result.rho_atoms]),
        mean_photon_1=result.mean_photon1,
        mean_photon_2=result.mean_photon2,
        retained_mass=mass,
    )


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepSpec:
    """A base point, one axis to scan, and the shared time grid.

    axis_name is the column name of the scanned quantity.  C_kg scans the
    cooperative parameter g^2/(kappa gamma) at fixed gamma_over_kappa;
    g1_tracks_axis ties the first atom's coupling to the axis value (used for
    the hopping sweep where g1 = J).
    """

    base: PointSpec
    engine: str
    axis_name: str
    axis_values: tuple
    t_max: float
    t_samples: int
    gamma_over_kappa: float | None = None
    g1_tracks_axis: bool = False

    def grid(self) -> TimeGrid:
        return TimeGrid.regular(self.t_max, self.t_samples)


_AXIS_FIELDS = {
    "J_over_g": "J_over_g",
    "delta_over_g": "delta_over_g",
    "n_bar": "n_bar",
    "kappa_over_g": "kappa_over_g",
    "gamma_over_g": "gamma_over_g",
}


def apply_axis(spec: SweepSpec, value: float) -> PointSpec:
    """The parameter point at one axis position."""
    updates: dict = {}
    if spec.axis_name in _AXIS_FIELDS:
        updates[_AXIS_FIELDS[spec.axis_name]] = float(value)
    elif spec.axis_name == "C_kg":
        if spec.gamma_over_kappa is None:
            raise ConfigError("C_kg axis needs gamma_over_kappa")
        kappa, gamma = rates_from_cooperative(float(value), spec.gamma_over_kappa)
        updates["kappa_over_g"] = kappa
        updates["gamma_over_g"] = gamma
    else:
        raise ConfigError(f"unknown axis {spec.axis_name!r}")
    if spec.g1_tracks_axis:
        if spec.axis_name != "J_over_g":
            raise ConfigError("g1 can only track a hopping axis")
        updates["g1_over_g"] = float(value)
    return dataclasses.replace(spec.base, **updates)


def _sweep_task(args):
    spec, index = args
    point = apply_axis(spec, spec.axis_values[index])
    return index, run_point(point, spec.grid(), spec.engine)


def worker_count(requested: int | None = None) -> int:
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class ResultTable:
    """Sweep results keyed by (axis value, time)."""

    axis_name: str
    axis_values: np.ndarray
    times: np.ndarray
    series: list

    def rows(self):
        for a, s in zip(self.axis_values, self.series):
            for k, t in enumerate(self.times):
                yield (a, t, s.concurrence[k], s.inversion[k],
                       s.mean_photon_1[k], s.mean_photon_2[k], s.retained_mass)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            self.write(fh)

    def write(self, fh) -> None:
        fh.write(",".join((self.axis_name,) + RESULT_COLUMNS) + "\n")
        for row in self.rows():
            fh.write(",".join(f"{v:.12g}" for v in row) + "\n")


def run_sweep(spec: SweepSpec, workers: int | None = None) -> ResultTable:
    """Run every axis point, in parallel when workers > 1.

    Points are independent, so the assembled table is identical regardless of
    worker count; tasks are mapped in order and results keyed by index.
    """
    n_points = len(spec.axis_values)
    n_workers = min(worker_count(workers), n_points)
    tasks = [(spec, i) for i in range(n_points)]
    if n_workers <= 1 or n_points <= 1:
        results = [_sweep_task(t) for t in tasks]
    else:
        with get_context("fork").Pool(processes=n_workers) as pool:
            results = pool.map(_sweep_task, tasks)
    series: list = [None] * n_points
    for index, s in results:
        series[index] = s
    return ResultTable(
        axis_name=spec.axis_name,
        axis_values=np.asarray(spec.axis_values, dtype=float),
        times=spec.grid().samples,
        series=series,
    )


# ---------------------------------------------------------------------------
# figure presets

T_MAX_DEFAULT = 50.0
T_SAMPLES_DEFAULT = 500
AXIS_SAMPLES_DEFAULT = 120
COOPERATIVE_AXIS_DEFAULT = (5.0, 500.0, 40)


def _hopping_axis(lo=0.0, hi=30.0, n=AXIS_SAMPLES_DEFAULT):
    return tuple(np.linspace(lo, hi, n))


def _preset_fig2():
    base = PointSpec(initial_state="e1g2", delta_over_g=10.0, n_bar=1.0)
    return [("fig2", SweepSpec(base, "unitary", "J_over_g", _hopping_axis(),
                               T_MAX_DEFAULT, T_SAMPLES_DEFAULT),
             "one atom excited; strong detuning; hopping scan")]


def _preset_fig3():
    base = PointSpec(initial_state="e1g2", J_over_g=25.0, n_bar=1.0)
    return [("fig3", SweepSpec(base, "unitary", "delta_over_g", _hopping_axis(),
                               T_MAX_DEFAULT, T_SAMPLES_DEFAULT),
             "one atom excited; strong hopping; detuning scan")]


def _preset_fig4():
    axis = _hopping_axis()
    a = PointSpec(initial_state="e1e2", delta_over_g=18.5, n_bar=0.1)
    b = PointSpec(initial_state="g1g2", delta_over_g=18.5, n_bar=0.1)
    c = PointSpec(initial_state="e1e2", delta_over_g=0.0, n_bar=0.1)
    return [
        ("fig4a", SweepSpec(a, "unitary", "J_over_g", axis, T_MAX_DEFAULT,
                            T_SAMPLES_DEFAULT),
         "both atoms excited; detuned; hopping scan"),
        ("fig4b", SweepSpec(b, "unitary", "J_over_g", axis, T_MAX_DEFAULT,
                            T_SAMPLES_DEFAULT),
         "both atoms in the ground state; detuned; hopping scan"),
        ("fig4c", SweepSpec(c, "unitary", "J_over_g", axis, T_MAX_DEFAULT,
                            T_SAMPLES_DEFAULT, g1_tracks_axis=True),
         "both atoms excited; resonant; g1 tied to the hopping"),
    ]


def _preset_fig5():
    base = PointSpec(initial_state="e1e2", delta_over_g=18.5, J_over_g=20.0, n_bar=0.1)
    return [("fig5", SweepSpec(base, "unitary", "J_over_g", (20.0,),
                               T_MAX_DEFAULT, T_SAMPLES_DEFAULT),
             "single point; inversion and cavity-1 photon number vs time")]


def _preset_fig6():
    base = PointSpec(initial_state="bell_plus", delta_over_g=0.0, n_bar=0.1)
    return [("fig6", SweepSpec(base, "unitary", "J_over_g", _hopping_axis(),
                               T_MAX_DEFAULT, T_SAMPLES_DEFAULT),
             "Bell pair; resonant; hopping scan")]


def _preset_fig7():
    axis = (0.1, 1.0, 5.0)
    a = PointSpec(initial_state="e1g2", delta_over_g=0.0, J_over_g=10.0)
    b = PointSpec(initial_state="bell_plus", delta_over_g=0.0, J_over_g=10.0)
    return [
        ("fig7a", SweepSpec(a, "unitary", "n_bar", axis, T_MAX_DEFAULT,
                            T_SAMPLES_DEFAULT),
         "one atom excited; occupation comparison"),
        ("fig7b", SweepSpec(b, "unitary", "n_bar", axis, T_MAX_DEFAULT,
                            T_SAMPLES_DEFAULT),
         "Bell pair; occupation comparison"),
    ]


def _cooperative_axis(lo=None, hi=None, n=None):
    lo = COOPERATIVE_AXIS_DEFAULT[0] if lo is None else lo
    hi = COOPERATIVE_AXIS_DEFAULT[1] if hi is None else hi
    n = COOPERATIVE_AXIS_DEFAULT[2] if n is None else n
    return tuple(np.linspace(lo, hi, n))


def _preset_fig8():
    eg = PointSpec(initial_state="e1g2", delta_over_g=0.0, J_over_g=10.0, n_bar=0.1)
    bell = PointSpec(initial_state="bell_plus", delta_over_g=15.0, J_over_g=5.0, n_bar=0.1)
    axis = _cooperative_axis()
    out = []
    for name, base, ratio in (("fig8a", eg, 0.1), ("fig8b", eg, 1.0),
                              ("fig8c", bell, 0.1), ("fig8d", bell, 1.0)):
        out.append((name, SweepSpec(base, "lindblad", "C_kg", axis, T_MAX_DEFAULT,
                                    T_SAMPLES_DEFAULT, gamma_over_kappa=ratio),
                    f"damped; gamma/kappa = {ratio}; cooperative-parameter scan"))
    return out


_PRESETS = {
    "fig2": _preset_fig2,
    "fig3": _preset_fig3,
    "fig4": _preset_fig4,
    "fig5": _preset_fig5,
    "fig6": _preset_fig6,
    "fig7": _preset_fig7,
    "fig8": _preset_fig8,
}

# individual panels are addressable too: figure fig8a only runs that panel
_PANEL_PRESETS = {
    name: parent for parent, builder in _PRESETS.items() for name, _, _ in builder()
    if name != parent
}


def preset_names() -> list:
    names = sorted(_PRESETS)
    names += sorted(n for n in _PANEL_PRESETS if n not in _PRESETS)
    return names


def _override_spec(spec: SweepSpec, t_max, t_samples, axis_min, axis_max, axis_samples):
    changes: dict = {}
    if t_max is not None:
        changes["t_max"] = float(t_max)
    if t_samples is not None:
        changes["t_samples"] = int(t_samples)
    if axis_min is not None or axis_max is not None or axis_samples is not None:
        values = np.asarray(spec.axis_values, dtype=float)
        lo = values.min() if axis_min is None else float(axis_min)
        hi = values.max() if axis_max is None else float(axis_max)
        n = values.size if axis_samples is None else int(axis_samples)
        changes["axis_values"] = tuple(np.linspace(lo, hi, n)) if n > 1 else (lo,)
    return dataclasses.replace(spec, **changes) if changes else spec


def _metadata(name: str, spec: SweepSpec, note: str) -> dict:
    point = spec.base
    return {
        "preset": name,
        "note": note,
        "engine": spec.engine,
        "initial_state": point.initial_state,
        "axis": {
            "name": spec.axis_name,
            "values": [float(f"{v:.12g}") for v in spec.axis_values],
            "gamma_over_kappa": spec.gamma_over_kappa,
            "g1_tracks_axis": spec.g1_tracks_axis,
        },
        "time_grid": {"t_max": spec.t_max, "samples": spec.t_samples},
        "parameters": {
            "delta_over_g": point.delta_over_g,
            "J_over_g": point.J_over_g,
            "n_bar": point.n_bar,
            "g1_over_g": point.g1_over_g,
            "g2_over_g": point.g2_over_g,
            "kappa_over_g": point.kappa_over_g,
            "gamma_over_g": point.gamma_over_g,
            "fock_cutoff": point.cutoff(),
        },
        "columns": [spec.axis_name] + list(RESULT_COLUMNS),
    }


def run_figure(name: str, outdir=".", t_max=None, t_samples=None, axis_min=None,
               axis_max=None, axis_samples=None, workers=None) -> list:
    """Produce the CSV (plus a JSON sidecar) for a figure preset.

    Multi-panel presets write one file pair per panel.  Returns the CSV paths.
    """
    if name in _PRESETS:
        panels = _PRESETS[name]()
    elif name in _PANEL_PRESETS:
        panels = [p for p in _PRESETS[_PANEL_PRESETS[name]]() if p[0] == name]
    else:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(preset_names())}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for panel_name, spec, note in panels:
        spec = _override_spec(spec, t_max, t_samples, axis_min, axis_max, axis_samples)
        table = run_sweep(spec, workers=workers)
        csv_path = outdir / f"{panel_name}.csv"
        table.write_csv(csv_path)
        meta_path = outdir / f"{panel_name}.meta.json"
        with open(meta_path, "w", newline="\n") as fh:
            json.dump(_metadata(panel_name, spec, note), fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(csv_path)
    return written


# ---------------------------------------------------------------------------
# flat key = value sweep configuration

_SCALAR_KEYS = {
    "initial_state": str,
    "delta_over_g": float,
    "J_over_g": float,
    "n_bar": float,
    "g1_over_g": float,
    "g2_over_g": float,
    "kappa_over_g": float,
    "gamma_over_g": float,
    "cutoff_override": int,
    "t_max": float,
    "t_samples": int,
    "engine": str,
    "output": str,
}

_SWEEPABLE = ("delta_over_g", "J_over_g", "n_bar", "kappa_over_g", "gamma_over_g")


def _parse_values(key: str, text: str):
    """Scalar, comma list, or linspace:lo:hi:n."""
    text = text.strip()
    if text.startswith("linspace:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"{key}: expected linspace:lo:hi:n, got {text!r}")
        try:
            lo, hi, n = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as err:
            raise ConfigError(f"{key}: {err}") from None
        if n < 1:
            raise ConfigError(f"{key}: linspace needs at least one sample")
        return [float(v) for v in np.linspace(lo, hi, n)]
    if "," in text:
        try:
            return [float(v) for v in text.split(",")]
        except ValueError as err:
            raise ConfigError(f"{key}: {err}") from None
    caster = _SCALAR_KEYS[key]
    try:
        return [caster(text)] if key in _SWEEPABLE else caster(text)
    except ValueError as err:
        raise ConfigError(f"{key}: {err}") from None


def parse_config_text(text: str) -> tuple[SweepSpec, str]:
    """Parse a flat key = value sweep config; returns the spec and output path.

    Exactly one of the sweepable keys may carry several values; it becomes the
    axis.  A config with only scalars is a single-point sweep over J_over_g.
    """
    entries: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _SCALAR_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = _parse_values(key, value)

    if "initial_state" not in entries:
        raise ConfigError("initial_state is required")

    multi = [k for k in _SWEEPABLE if isinstance(entries.get(k), list)
             and len(entries[k]) > 1]
    if len(multi) > 1:
        raise ConfigError(f"only one key may sweep, got {multi}")

    point_fields = {}
    for key in ("initial_state", "delta_over_g", "J_over_g", "n_bar", "g1_over_g",
                "g2_over_g", "kappa_over_g", "gamma_over_g", "cutoff_override"):
        if key in entries:
            value = entries[key]
            point_fields[key] = value[0] if isinstance(value, list) else value
    base = PointSpec(**point_fields)

    engine = entries.get("engine", "unitary")
    if engine not in ENGINES:
        raise ConfigError(f"engine must be one of {ENGINES}")
    for key in ("kappa_over_g", "gamma_over_g"):
        value = entries.get(key, 0.0)
        peak = max(value) if isinstance(value, list) else value
        if peak > 0.0 and engine != "lindblad":
            raise ConfigError(f"{key} > 0 requires engine = lindblad")
    if multi:
        axis_name = multi[0]
        axis_values = tuple(entries[axis_name])
        if list(axis_values) != sorted(set(axis_values)):
            raise ConfigError(f"{axis_name}: axis values must be strictly increasing")
    else:
        axis_name = "J_over_g"
        axis_values = (base.J_over_g,)

    spec = SweepSpec(
        base=base,
        engine=engine,
        axis_name=axis_name,
        axis_values=axis_values,
        t_max=entries.get("t_max", T_MAX_DEFAULT),
        t_samples=entries.get("t_samples", T_SAMPLES_DEFAULT),
    )
    return spec, entries.get("output", "sweep.csv")
