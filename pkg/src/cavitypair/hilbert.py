"""Excitation-number bookkeeping for the coupled-cavity state space.

The atom-field interaction conserves the total excitation count (atomic
excitations plus photons in both cavities), so the full Hilbert space splits
into finite invariant sectors.  Each sector can be enumerated, indexed and
diagonalized on its own, which is what makes exact propagation cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

GROUND = "g"
EXCITED = "e"

_LEVELS = (GROUND, EXCITED)

# Atomic sectors in canonical order.  Within a sector of total excitation N the
# field states carry a fixed photon sum, listed with n1 decreasing.
_SECTOR_ORDER = ((EXCITED, GROUND), (GROUND, EXCITED), (GROUND, GROUND), (EXCITED, EXCITED))


@dataclass(frozen=True, order=True)
class BasisState:
    """Product ket |atom1 atom2>|n1>|n2> with photon numbers n1, n2."""

    atom1: str
    atom2: str
    n1: int
    n2: int

    def __post_init__(self):
        if self.atom1 not in _LEVELS or self.atom2 not in _LEVELS:
            raise ValueError(f"atomic levels must be '{GROUND}' or '{EXCITED}'")
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("photon numbers must be nonnegative")

    @property
    def excitation(self) -> int:
        """Total excitation: excited atoms plus photons in both modes."""
        return int(self.atom1 == EXCITED) + int(self.atom2 == EXCITED) + self.n1 + self.n2

    def label(self) -> str:
        return f"|{self.atom1}{self.atom2};{self.n1},{self.n2}>"


@dataclass(frozen=True)
class Subspace:
    """One invariant sector: every basis state has total excitation N.

    States are grouped by atomic configuration (eg, ge, gg, ee in that order)
    and sorted by decreasing n1 within each group, so the two singly-excited
    atomic sectors list their field labels in identical positional order.
    """

    N: int
    basis: tuple[BasisState, ...]
    index: dict
    sectors: dict

    @property
    def dim(self) -> int:
        return len(self.basis)

    def sector_slice(self, atom1: str, atom2: str) -> slice:
        return self.sectors.get((atom1, atom2), slice(0, 0))

    def position(self, state: BasisState) -> int:
        try:
            return self.index[state]
        except KeyError:
            raise KeyError(f"{state.label()} is not in the N={self.N} sector") from None


@lru_cache(maxsize=None)
def enumerate_subspace(N: int) -> Subspace:
    """Enumerate the invariant sector with total excitation N.

    Dimension is 1 for N=0, 4 for N=1 and 4N for N>=2 (the doubly-excited
    atomic group only opens up once two excitations are available).
    """
    if N < 0:
        raise ValueError("excitation number must be nonnegative")
    basis: list[BasisState] = []
    sectors: dict = {}
    for atom1, atom2 in _SECTOR_ORDER:
        photons = N - int(atom1 == EXCITED) - int(atom2 == EXCITED)
        if photons < 0:
            continue
        start = len(basis)
        for n1 in range(photons, -1, -1):
            basis.append(BasisState(atom1, atom2, n1, photons - n1))
        sectors[(atom1, atom2)] = slice(start, len(basis))
    index = {state: i for i, state in enumerate(basis)}
    return Subspace(N=N, basis=tuple(basis), index=index, sectors=sectors)


def cutoff_for(n_bar: float) -> int:
    """Per-mode Fock cutoff adequate for a thermal occupation n_bar.

    Keeps roughly five standard deviations of thermal weight: about 5(n_bar+1)
    levels at low occupation, one extra multiple of n_bar beyond unity where
    the geometric tail is fatter.  Half-integer values round down.
    """
    if not math.isfinite(n_bar) or n_bar < 0:
        raise ValueError("thermal occupation must be finite and nonnegative")
    scale = 5.0 * (n_bar + 1.0) if n_bar < 1.0 else 5.0 * (n_bar + 2.0)
    return int(math.ceil(scale - 0.5))
