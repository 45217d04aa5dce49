"""Thermal field statistics and initial-state preparation.

A thermal single-mode field is diagonal in the Fock basis, so an atomic pure
state paired with two thermal fields is an exact statistical mixture of pure
trajectories labelled by the initial photon pair (n1, n2).  Each trajectory
lives inside a single excitation sector and can be propagated independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Two-qubit atomic basis order used throughout: |e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>.
ATOMIC_BASIS = ("ee", "eg", "ge", "gg")

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def thermal_pmf(n_bar: float, n: int) -> float:
    """Probability of n photons in a thermal state with mean occupation n_bar."""
    if not math.isfinite(n_bar) or n_bar < 0:
        raise ValueError("thermal occupation must be finite and nonnegative")
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    if n_bar == 0.0:
        return 1.0 if n == 0 else 0.0
    return n_bar**n / (n_bar + 1.0) ** (n + 1)


@dataclass(frozen=True)
class ThermalSpec:
    """Thermal occupation together with the per-mode Fock cutoff retained."""

    n_bar: float
    cutoff: int

    def __post_init__(self):
        if not math.isfinite(self.n_bar) or self.n_bar < 0:
            raise ValueError("thermal occupation must be finite and nonnegative")
        if self.cutoff < 0:
            raise ValueError("cutoff must be nonnegative")

    def weights(self) -> np.ndarray:
        """Raw (unrenormalized) thermal probabilities for n = 0 .. cutoff."""
        return np.array([thermal_pmf(self.n_bar, n) for n in range(self.cutoff + 1)])

    def retained_mass(self) -> float:
        """Thermal probability kept by the cutoff; the tail is geometric."""
        if self.n_bar == 0.0:
            return 1.0
        ratio = self.n_bar / (self.n_bar + 1.0)
        return 1.0 - ratio ** (self.cutoff + 1)


@dataclass(frozen=True)
class AtomicInitialState:
    """Pure two-atom state with a definite number of atomic excitations."""

    kind: str
    amplitudes: np.ndarray
    excitation: int

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


_ATOMIC_KINDS = {
    "e1e2": (np.array([1.0, 0.0, 0.0, 0.0]), 2),
    "e1g2": (np.array([0.0, 1.0, 0.0, 0.0]), 1),
    "g1e2": (np.array([0.0, 0.0, 1.0, 0.0]), 1),
    "g1g2": (np.array([0.0, 0.0, 0.0, 1.0]), 0),
    "bell_plus": (np.array([0.0, _SQRT_HALF, _SQRT_HALF, 0.0]), 1),
}


def atomic_state(kind: str) -> AtomicInitialState:
    """Named initial two-atom states: the four product states and the symmetric
    Bell combination of the singly-excited pair."""
    try:
        amplitudes, excitation = _ATOMIC_KINDS[kind]
    except KeyError:
        known = ", ".join(sorted(_ATOMIC_KINDS))
        raise ValueError(f"unknown atomic state {kind!r}; expected one of {known}") from None
    amps = amplitudes.copy()
    amps.flags.writeable = False
    return AtomicInitialState(kind=kind, amplitudes=amps, excitation=excitation)


@dataclass(frozen=True)
class ThermalTrajectory:
    """One pure-state member of the thermal mixture: initial photons (n1, n2)."""

    weight: float
    n1: int
    n2: int


@dataclass(frozen=True)
class ThermalEnsemble:
    """Weighted pure-state decomposition of atoms x thermal x thermal.

    Weights are renormalized over the retained trajectories; retained_mass
    records the raw thermal probability they carried before renormalization.
    """

    atoms: AtomicInitialState
    trajectories: tuple
    retained_mass: float

    def __len__(self) -> int:
        return len(self.trajectories)


def initial_density(atoms: AtomicInitialState, field1: ThermalSpec, field2: ThermalSpec,
                    max_excitation: int | None = None) -> ThermalEnsemble:
    """Decompose the initial state into weighted trajectories, one per (n1, n2).

    Trajectories are listed in lexicographic (n1, n2) order, which downstream
    code relies on for reproducible summation.  An optional cap on total
    excitation drops high-lying trajectories (useful for cross-checks against
    dense propagation on a small space).
    """
    w1 = field1.weights()
    w2 = field2.weights()
    kept: list[ThermalTrajectory] = []
    total = 0.0
    for n1 in range(field1.cutoff + 1):
        for n2 in range(field2.cutoff + 1):
            if max_excitation is not None and atoms.excitation + n1 + n2 > max_excitation:
                continue
            weight = w1[n1] * w2[n2]
            total += weight
            kept.append(ThermalTrajectory(weight=weight, n1=n1, n2=n2))
    if not kept or total <= 0.0:
        raise ValueError("no thermal weight retained; loosen the cutoff or excitation cap")
    trajectories = tuple(
        ThermalTrajectory(weight=t.weight / total, n1=t.n1, n2=t.n2) for t in kept
    )
    return ThermalEnsemble(atoms=atoms, trajectories=trajectories, retained_mass=total)
