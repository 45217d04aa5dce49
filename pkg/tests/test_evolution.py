"""Unitary engine against analytic cases and brute-force dense propagation."""

import numpy as np
import pytest

from dense_reference import dense_reduced_evolution
from cavitypair.entanglement import is_x_form
from cavitypair.evolution import TimeGrid, evolve_trajectory, reduced_atomic_density
from cavitypair.model import ModelParams, build_hamiltonian_block
from cavitypair.hilbert import enumerate_subspace
from cavitypair.states import AtomicInitialState, ThermalSpec, atomic_state, initial_density


def test_time_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ValueError):
        TimeGrid(np.array([-1.0, 1.0]))
    with pytest.raises(ValueError):
        TimeGrid(np.array([]))
    grid = TimeGrid.regular(10.0, 11)
    assert len(grid) == 11 and grid.samples[-1] == 10.0


def test_vacuum_rabi_oscillation():
    # resonant, no hopping: excitation swaps between atom 1 and its own cavity
    p = ModelParams.symmetric(delta=0.0, J=0.0, g=1.0)
    grid = TimeGrid(np.linspace(0.0, 2.0 * np.pi, 101))
    psi0 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    psi = evolve_trajectory(p, 1, psi0, grid)
    t = grid.samples
    assert np.abs(psi[:, 0] - np.cos(t)).max() < 1e-12
    assert np.abs(psi[:, 2] + 1j * np.sin(t)).max() < 1e-12
    assert np.abs(psi[:, 1]).max() == 0.0
    assert np.abs(psi[:, 3]).max() == 0.0


def test_energy_is_conserved():
    rng = np.random.default_rng(2)
    p = ModelParams(g1=1.1, g2=0.7, delta1=1.3, delta2=-0.4, J=0.9)
    sub = enumerate_subspace(3)
    h = build_hamiltonian_block(p, sub).matrix
    psi0 = rng.normal(size=sub.dim) + 1j * rng.normal(size=sub.dim)
    psi0 /= np.linalg.norm(psi0)
    psi = evolve_trajectory(p, 3, psi0, TimeGrid(np.linspace(0.0, 20.0, 60)))
    energies = np.einsum("ti,ij,tj->t", psi.conj(), h, psi).real
    assert np.abs(energies - energies[0]).max() < 1e-11


def test_initial_reduced_state_matches_atoms():
    for kind in ("e1e2", "e1g2", "g1e2", "g1g2", "bell_plus"):
        atoms = atomic_state(kind)
        p = ModelParams.symmetric(delta=0.5, J=1.0, n_bar=0.4)
        out = reduced_atomic_density(p, atoms, TimeGrid(np.array([0.0, 1.0])),
                                     cutoff1=3, cutoff2=3)
        assert np.abs(out.rho[0] - atoms.density()).max() < 1e-14


def test_reduced_state_contract():
    p = ModelParams.symmetric(delta=0.7, J=1.3, n_bar=0.3)
    out = reduced_atomic_density(p, atomic_state("bell_plus"),
                                 TimeGrid(np.linspace(0.0, 15.0, 40)),
                                 cutoff1=2, cutoff2=2)
    traces = np.einsum("tii->t", out.rho).real
    assert np.abs(traces - 1.0).max() < 1e-12
    herm = np.abs(out.rho - np.conj(np.transpose(out.rho, (0, 2, 1)))).max()
    assert herm == 0.0
    assert np.linalg.eigvalsh(out.rho).min() >= -1e-10


def test_reduced_state_is_x_form_for_all_kinds():
    p = ModelParams.symmetric(delta=0.7, J=1.3, n_bar=0.3)
    grid = TimeGrid(np.linspace(0.0, 12.0, 25))
    for kind in ("e1e2", "e1g2", "g1e2", "g1g2", "bell_plus"):
        out = reduced_atomic_density(p, atomic_state(kind), grid, cutoff1=2, cutoff2=2)
        for rho in out.rho:
            assert is_x_form(rho, tol=1e-12)


def test_rabi_reduced_observables():
    # single trajectory: photon appears in cavity 1 as the atom de-excites
    p = ModelParams.symmetric(delta=0.0, J=0.0, n_bar=0.0)
    grid = TimeGrid(np.linspace(0.0, np.pi, 50))
    out = reduced_atomic_density(p, atomic_state("e1g2"), grid)
    t = grid.samples
    assert np.abs(out.rho[:, 1, 1].real - np.cos(t) ** 2).max() < 1e-12
    assert np.abs(out.rho[:, 3, 3].real - np.sin(t) ** 2).max() < 1e-12
    assert np.abs(out.mean_photon1 - np.sin(t) ** 2).max() < 1e-12
    assert np.abs(out.mean_photon2).max() == 0.0
    assert np.abs(out.concurrence()).max() <= 1e-12


def test_initial_mean_photons_match_ensemble():
    p = ModelParams.symmetric(delta=1.0, J=2.0, n_bar=0.8)
    out = reduced_atomic_density(p, atomic_state("g1g2"),
                                 TimeGrid(np.array([0.0, 3.0])), cutoff1=6, cutoff2=6)
    ens = initial_density(atomic_state("g1g2"), ThermalSpec(0.8, 6), ThermalSpec(0.8, 6))
    expected = sum(t.weight * t.n1 for t in ens.trajectories)
    assert out.mean_photon1[0] == pytest.approx(expected, rel=1e-12)
    assert out.mean_photon2[0] == pytest.approx(expected, rel=1e-12)


def test_matches_dense_propagation():
    rng = np.random.default_rng(31)
    grid = TimeGrid(np.linspace(0.0, 6.0, 7))
    for _ in range(3):
        p = ModelParams(
            g1=rng.uniform(0.3, 1.5), g2=rng.uniform(0.3, 1.5),
            delta1=rng.uniform(-2.0, 2.0), delta2=rng.uniform(-2.0, 2.0),
            J=rng.uniform(-1.5, 1.5), n_bar1=0.4, n_bar2=0.4,
        )
        out = reduced_atomic_density(p, atomic_state("e1g2"), grid,
                                     cutoff1=2, cutoff2=2, max_excitation=3)
        ens = initial_density(atomic_state("e1g2"), ThermalSpec(0.4, 2), ThermalSpec(0.4, 2),
                              max_excitation=3)
        expected = dense_reduced_evolution(p, ens, grid.samples, n_max=3)
        assert np.abs(out.rho - expected).max() < 1e-10


def test_bell_freezing_spot_check():
    p = ModelParams.symmetric(delta=0.0, J=20.0, n_bar=0.1)
    out = reduced_atomic_density(p, atomic_state("bell_plus"),
                                 TimeGrid(np.linspace(0.0, 10.0, 80)))
    assert out.concurrence().min() >= 0.85


def test_mixed_excitation_input_rejected():
    amps = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    bad = AtomicInitialState(kind="custom", amplitudes=amps, excitation=1)
    p = ModelParams.symmetric(n_bar=0.1)
    with pytest.raises(ValueError):
        reduced_atomic_density(p, bad, TimeGrid(np.array([0.0, 1.0])))


def test_engine_is_deterministic():
    p = ModelParams.symmetric(delta=0.3, J=5.0, n_bar=0.6)
    grid = TimeGrid(np.linspace(0.0, 8.0, 30))
    a = reduced_atomic_density(p, atomic_state("bell_plus"), grid, cutoff1=4, cutoff2=4)
    b = reduced_atomic_density(p, atomic_state("bell_plus"), grid, cutoff1=4, cutoff2=4)
    assert np.array_equal(a.rho, b.rho)
    assert np.array_equal(a.mean_photon1, b.mean_photon1)
