"""Command line front end: single runs, config sweeps, figure presets, self-checks."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .evolution import TimeGrid
from .sweeps import (
    ConfigError,
    PointSpec,
    ResultTable,
    SweepSpec,
    T_MAX_DEFAULT,
    T_SAMPLES_DEFAULT,
    parse_config_text,
    preset_names,
    run_figure,
    run_sweep,
)


def _add_point_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--initial-state", required=True,
                        choices=("e1e2", "e1g2", "g1e2", "g1g2", "bell_plus"))
    parser.add_argument("--delta-over-g", type=float, default=0.0)
    parser.add_argument("--j-over-g", "--J-over-g", dest="j_over_g", type=float, default=0.0)
    parser.add_argument("--n-bar", type=float, default=0.0)
    parser.add_argument("--g1-over-g", type=float, default=1.0)
    parser.add_argument("--g2-over-g", type=float, default=1.0)
    parser.add_argument("--kappa-over-g", type=float, default=0.0)
    parser.add_argument("--gamma-over-g", type=float, default=0.0)
    parser.add_argument("--cutoff-override", type=int, default=None)
    parser.add_argument("--engine", choices=("unitary", "lindblad"), default="unitary")
    parser.add_argument("--t-max", type=float, default=T_MAX_DEFAULT)
    parser.add_argument("--t-samples", type=int, default=T_SAMPLES_DEFAULT)


def _cmd_simulate(args) -> int:
    point = PointSpec(
        initial_state=args.initial_state,
        delta_over_g=args.delta_over_g,
        J_over_g=args.j_over_g,
        n_bar=args.n_bar,
        g1_over_g=args.g1_over_g,
        g2_over_g=args.g2_over_g,
        kappa_over_g=args.kappa_over_g,
        gamma_over_g=args.gamma_over_g,
        cutoff_override=args.cutoff_override,
    )
    spec = SweepSpec(base=point, engine=args.engine, axis_name="J_over_g",
                     axis_values=(point.J_over_g,), t_max=args.t_max,
                     t_samples=args.t_samples)
    table = run_sweep(spec, workers=1)
    if args.output in (None, "-"):
        table.write(sys.stdout)
    else:
        table.write_csv(args.output)
        print(f"wrote {args.output}")
    return 0


def _cmd_sweep(args) -> int:
    with open(args.config) as fh:
        spec, output = parse_config_text(fh.read())
    if args.output:
        output = args.output
    table = run_sweep(spec, workers=args.workers)
    table.write_csv(output)
    print(f"wrote {output} ({len(spec.axis_values)} axis points x {spec.t_samples} times)")
    return 0


def _cmd_figure(args) -> int:
    written = run_figure(
        args.name, outdir=args.outdir, t_max=args.t_max, t_samples=args.t_samples,
        axis_min=args.axis_min, axis_max=args.axis_max, axis_samples=args.axis_samples,
        workers=args.workers,
    )
    for path in written:
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# validate: fast invariant and oracle agreement checks


def _check_hermitian():
    from .hilbert import enumerate_subspace
    from .model import ModelParams, build_hamiltonian_block

    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(20):
        p = ModelParams(g1=rng.uniform(0.2, 2), g2=rng.uniform(0.2, 2),
                        delta1=rng.uniform(-5, 5), delta2=rng.uniform(-5, 5),
                        J=rng.uniform(-3, 3))
        N = int(rng.integers(0, 7))
        h = build_hamiltonian_block(p, enumerate_subspace(N)).matrix
        worst = max(worst, float(np.abs(h - h.T).max()))
    return worst <= 1e-14, f"max asymmetry {worst:.2e}"


def _check_spectra_agree():
    from .hilbert import enumerate_subspace
    from .model import ModelParams, build_delocalized_block, build_hamiltonian_block

    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(5):
        p = ModelParams.symmetric(delta=rng.uniform(-5, 5), J=rng.uniform(-3, 3),
                                  g=rng.uniform(0.2, 2))
        for N in range(0, 5):
            sub = enumerate_subspace(N)
            local = np.sort(np.linalg.eigvalsh(build_hamiltonian_block(p, sub).matrix))
            deloc = np.sort(np.linalg.eigvalsh(build_delocalized_block(p, sub).matrix))
            worst = max(worst, float(np.abs(local - deloc).max()))
    return worst <= 1e-10, f"max eigenvalue gap {worst:.2e}"


def _check_concurrence_paths():
    from .entanglement import concurrence_general, concurrence_x

    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(200):
        pops = rng.dirichlet(np.ones(4))
        rho = np.diag(pops).astype(complex)
        e = rng.uniform(0, 1) * np.sqrt(pops[1] * pops[2]) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        g = rng.uniform(0, 1) * np.sqrt(pops[0] * pops[3]) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        rho[1, 2], rho[2, 1] = e, np.conj(e)
        rho[0, 3], rho[3, 0] = g, np.conj(g)
        worst = max(worst, abs(concurrence_x(rho) - concurrence_general(rho)))
    return worst <= 1e-10, f"max path disagreement {worst:.2e}"


def _check_dispersive_oracle():
    from .evolution import reduced_atomic_density
    from .model import ModelParams, effective_params
    from .oracle import effective_concurrence_eg
    from .states import atomic_state

    p = ModelParams.symmetric(delta=0.0, J=25.0, n_bar=0.1)
    grid = TimeGrid(np.linspace(0.0, 16.0 * np.pi, 161))
    out = reduced_atomic_density(p, atomic_state("e1g2"), grid)
    predicted = effective_concurrence_eg(effective_params(p).exchange_rate, grid.samples)
    worst = float(np.abs(out.concurrence() - predicted).max())
    return worst <= 0.1, f"max deviation {worst:.3f}"


def _check_lossless_master_equation():
    from .evolution import reduced_atomic_density
    from .lindblad import DissipationParams, FullSpace, integrate_master_equation, \
        thermal_product_state
    from .model import ModelParams
    from .states import ThermalSpec, atomic_state

    p = ModelParams.symmetric(delta=1.5, J=2.0, n_bar=0.1)
    atoms = atomic_state("e1g2")
    grid = TimeGrid(np.linspace(0.0, 8.0, 9))
    unitary = reduced_atomic_density(p, atoms, grid, cutoff1=1, cutoff2=1)
    space = FullSpace(3, 3)
    rho0, _ = thermal_product_state(atoms, ThermalSpec(0.1, 1), ThermalSpec(0.1, 1), space)
    result = integrate_master_equation(p, DissipationParams(), rho0, grid, space,
                                       step_scale=0.1)
    worst = float(np.abs(result.rho_atoms - unitary.rho).max())
    return worst <= 1e-6, f"max engine gap {worst:.2e}"


def _check_thermal_fixed_point():
    from .lindblad import DissipationParams, FullSpace, lindblad_rhs
    from .model import ModelParams
    from .states import thermal_pmf

    space = FullSpace(4, 4)
    p = ModelParams(g1=0.0, g2=0.0, delta1=0.0, delta2=0.0, J=0.0)
    diss = DissipationParams(kappa=0.8, gamma=0.5, n_bar=0.6)
    w = np.array([thermal_pmf(0.6, n) for n in range(5)])
    field = np.diag(w / w.sum())
    p_e = 0.6 / 2.2
    qubit = np.diag([p_e, 1.0 - p_e])
    rho = np.kron(np.kron(np.kron(qubit, qubit), field), field).astype(complex)
    worst = float(np.abs(lindblad_rhs(p, diss, rho, space)).max())
    return worst <= 1e-12, f"max residual {worst:.2e}"


_CHECKS = (
    ("sector hamiltonians hermitian", _check_hermitian),
    ("local and delocalized spectra agree", _check_spectra_agree),
    ("x-form concurrence matches general", _check_concurrence_paths),
    ("dispersive exchange oracle", _check_dispersive_oracle),
    ("lossless master equation matches unitary", _check_lossless_master_equation),
    ("thermal state stationary under bare damping", _check_thermal_fixed_point),
)


def _cmd_validate(_args) -> int:
    failures = 0
    for name, check in _CHECKS:
        try:
            ok, detail = check()
        except Exception as err:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(err).__name__}: {err}"
        print(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
        failures += 0 if ok else 1
    print(f"{len(_CHECKS) - failures}/{len(_CHECKS)} checks passed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavitypair",
        description="Entanglement dynamics of two atoms in hopping-coupled thermal cavities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="time series at a single parameter point")
    _add_point_arguments(p_sim)
    p_sim.add_argument("--output", default="-", help="CSV path, or - for stdout")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="axis sweep driven by a key = value config file")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--output", default=None, help="override the config output path")
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fig = sub.add_parser("figure", help="produce a canonical dataset")
    p_fig.add_argument("name", choices=preset_names())
    p_fig.add_argument("--outdir", default=".")
    p_fig.add_argument("--t-max", type=float, default=None)
    p_fig.add_argument("--t-samples", type=int, default=None)
    p_fig.add_argument("--axis-min", type=float, default=None)
    p_fig.add_argument("--axis-max", type=float, default=None)
    p_fig.add_argument("--axis-samples", type=int, default=None)
    p_fig.add_argument("--workers", type=int, default=None)
    p_fig.set_defaults(func=_cmd_figure)

    p_val = sub.add_parser("validate", help="run the fast self-check suite")
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # reader went away (e.g. piped into head); swap stdout for devnull so
        # the interpreter's exit flush does not raise a second time
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
