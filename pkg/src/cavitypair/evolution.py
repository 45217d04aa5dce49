"""Exact unitary propagation of the thermal trajectory ensemble.

Each trajectory starts in a single excitation sector and stays there, so one
eigendecomposition per sector propagates every trajectory and time sample in
that sector.  The two-atom reduced density matrix is accumulated trajectory by
trajectory in a fixed order to keep output bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .entanglement import clamp_psd, concurrence, population_inversion
from .hilbert import EXCITED, GROUND, BasisState, Subspace, cutoff_for, enumerate_subspace
from .model import ModelParams, build_hamiltonian_block
from .states import (
    ATOMIC_BASIS,
    AtomicInitialState,
    ThermalSpec,
    initial_density,
)

_ATOM_INDEX = {("e", "e"): 0, ("e", "g"): 1, ("g", "e"): 2, ("g", "g"): 3}
_ATOM_PAIR = {0: (EXCITED, EXCITED), 1: (EXCITED, GROUND), 2: (GROUND, EXCITED), 3: (GROUND, GROUND)}


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing dimensionless times g*t >= 0."""

    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("time grid must be a nonempty 1d array")
        if samples[0] < 0.0:
            raise ValueError("times must be nonnegative")
        if samples.size > 1 and np.any(np.diff(samples) <= 0.0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def regular(cls, t_max: float, count: int) -> "TimeGrid":
        if count < 2 or t_max <= 0.0:
            raise ValueError("need t_max > 0 and at least two samples")
        return cls(np.linspace(0.0, t_max, count))

    def __len__(self) -> int:
        return int(self.samples.size)


@lru_cache(maxsize=None)
def _reduction_maps(N: int):
    """Index machinery for tracing the fields out of one excitation sector.

    Returns the atomic-sector positions for the populations, the matched field
    label pairs for each atomic coherence, and the photon-number vectors.  Only
    coherences between atomic sectors sharing a photon sum survive; for a fixed
    total excitation that is just the eg-ge pair.
    """
    sub = enumerate_subspace(N)
    positions: dict = {}
    for a_idx, pair in _ATOM_PAIR.items():
        sl = sub.sector_slice(*pair)
        if sl.stop > sl.start:
            positions[a_idx] = np.arange(sl.start, sl.stop)
    pairs = []
    for ia in range(4):
        if ia not in positions:
            continue
        labels_a = {
            (sub.basis[p].n1, sub.basis[p].n2): p for p in positions[ia]
        }
        for ib in range(ia + 1, 4):
            if ib not in positions:
                continue
            rows_a, rows_b = [], []
            for p in positions[ib]:
                key = (sub.basis[p].n1, sub.basis[p].n2)
                if key in labels_a:
                    rows_a.append(labels_a[key])
                    rows_b.append(p)
            if rows_a:
                pairs.append((ia, ib, np.array(rows_a), np.array(rows_b)))
    n1 = np.array([s.n1 for s in sub.basis], dtype=float)
    n2 = np.array([s.n2 for s in sub.basis], dtype=float)
    return positions, pairs, n1, n2


class EigenPropagator:
    """Spectral propagator for one sector: psi(t) = V exp(-i w t) V^T psi(0)."""

    def __init__(self, sub: Subspace, matrix: np.ndarray, times: np.ndarray):
        if matrix.shape != (sub.dim, sub.dim):
            raise ValueError("block does not match the sector dimension")
        self.sub = sub
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(matrix)
        self.phases = np.exp(-1j * np.outer(self.eigenvalues, times))

    def amplitudes(self, initial: np.ndarray) -> np.ndarray:
        """Propagated amplitudes, shape (dim, n_times)."""
        coeff = self.eigenvectors.conj().T @ initial
        return self.eigenvectors @ (coeff[:, None] * self.phases)


def evolve_trajectory(params: ModelParams, N: int, initial: np.ndarray,
                      grid: TimeGrid) -> np.ndarray:
    """Propagate one pure state inside sector N; rows are time samples.

    The initial vector is given in the canonical sector basis and must be
    normalized; norm conservation is checked on the way out.
    """
    sub = enumerate_subspace(N)
    block = build_hamiltonian_block(params, sub)
    prop = EigenPropagator(sub, block.matrix, grid.samples)
    psi = prop.amplitudes(np.asarray(initial, dtype=complex))
    norms = np.linalg.norm(psi, axis=0)
    if np.abs(norms - 1.0).max() > 1e-12:
        raise RuntimeError("unitary propagation lost norm beyond 1e-12")
    return psi.T


@dataclass
class AtomicEvolution:
    """Reduced two-atom state and field observables on a time grid."""

    times: np.ndarray
    rho: np.ndarray  # (n_times, 4, 4)
    mean_photon1: np.ndarray
    mean_photon2: np.ndarray
    retained_mass: float

    def concurrence(self) -> np.ndarray:
        return np.array([concurrence(r) for r in self.rho])

    def inversion(self) -> np.ndarray:
        return np.array([population_inversion(r) for r in self.rho])


def _trajectory_vector(sub: Subspace, atoms: AtomicInitialState, n1: int, n2: int) -> np.ndarray:
    vec = np.zeros(sub.dim, dtype=complex)
    for a_idx, amp in enumerate(atoms.amplitudes):
        if amp == 0.0:
            continue
        pair = _ATOM_PAIR[a_idx]
        vec[sub.position(BasisState(pair[0], pair[1], n1, n2))] = amp
    return vec


def reduced_atomic_density(params: ModelParams, atoms: AtomicInitialState, grid: TimeGrid,
                           cutoff1: int | None = None, cutoff2: int | None = None,
                           max_excitation: int | None = None,
                           psd_tol: float = 1e-10) -> AtomicEvolution:
    """Two-atom reduced dynamics for thermal fields in both cavities.

    Parameters
    ----------
    params : ModelParams
        Couplings, detunings, hopping and thermal occupations (units of g).
    atoms : AtomicInitialState
        Pure initial state of the atom pair; its nonzero components must share
        one excitation number so each trajectory stays in a single sector.
    grid : TimeGrid
        Dimensionless times at which the reduced state is returned.
    cutoff1, cutoff2 : int, optional
        Per-mode Fock cutoffs; default follows cutoff_for(n_bar).
    max_excitation : int, optional
        Drop trajectories above this total excitation (testing hook).
    psd_tol : float
        Largest tolerated negativity of the reduced state.
    """
    populated = [a_idx for a_idx, amp in enumerate(atoms.amplitudes) if amp != 0.0]
    levels = {sum(1 for lvl in _ATOM_PAIR[a] if lvl == EXCITED) for a in populated}
    if len(levels) != 1:
        raise ValueError("atomic components must share a single excitation number")

    c1 = cutoff_for(params.n_bar1) if cutoff1 is None else int(cutoff1)
    c2 = cutoff_for(params.n_bar2) if cutoff2 is None else int(cutoff2)
    ensemble = initial_density(atoms, ThermalSpec(params.n_bar1, c1),
                               ThermalSpec(params.n_bar2, c2), max_excitation)

    times = grid.samples
    n_t = times.size
    rho = np.zeros((n_t, 4, 4), dtype=complex)
    mp1 = np.zeros(n_t)
    mp2 = np.zeros(n_t)

    propagators: dict = {}
    for traj in ensemble.trajectories:
        N = atoms.excitation + traj.n1 + traj.n2
        prop = propagators.get(N)
        if prop is None:
            sub = enumerate_subspace(N)
            block = build_hamiltonian_block(params, sub)
            prop = EigenPropagator(sub, block.matrix, times)
            propagators[N] = prop
        sub = prop.sub
        psi = prop.amplitudes(_trajectory_vector(sub, atoms, traj.n1, traj.n2))
        probs = psi.real**2 + psi.imag**2
        positions, pairs, n1_arr, n2_arr = _reduction_maps(N)
        w = traj.weight
        for a_idx, rows in positions.items():
            rho[:, a_idx, a_idx] += w * probs[rows].sum(axis=0)
        for ia, ib, rows_a, rows_b in pairs:
            rho[:, ia, ib] += w * (psi[rows_a] * psi[rows_b].conj()).sum(axis=0)
        mp1 += w * (n1_arr @ probs)
        mp2 += w * (n2_arr @ probs)

    for ia in range(4):
        for ib in range(ia + 1, 4):
            rho[:, ib, ia] = rho[:, ia, ib].conj()

    traces = np.einsum("tii->t", rho).real
    if np.abs(traces - 1.0).max() > 1e-12:
        raise RuntimeError("reduced state trace drifted beyond 1e-12")

    eigs = np.linalg.eigvalsh(rho)
    low = eigs.min()
    if low < -psd_tol:
        raise RuntimeError(f"reduced state negativity {low:.3e} exceeds {psd_tol:.1e}")
    if low < -1e-14:
        # clamp only the offending samples so exact zeros elsewhere survive
        for k in np.nonzero(eigs.min(axis=1) < -1e-14)[0]:
            rho[k] = clamp_psd(rho[k], tol=psd_tol)

    return AtomicEvolution(times=times, rho=rho, mean_photon1=mp1, mean_photon2=mp2,
                           retained_mass=ensemble.retained_mass)
