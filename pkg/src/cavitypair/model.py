"""Blockwise Hamiltonians for two Jaynes-Cummings cavities bridged by photon hopping.

All rates are expressed in units of a reference atom-field coupling g, and the
Hamiltonian is written in the frame rotating at the atomic transition, so the
cavity detunings appear on the photon number operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import EXCITED, GROUND, BasisState, Subspace


class ResonanceError(ValueError):
    """A shifted field mode is degenerate with the atomic transition."""


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the coupled-cavity pair, in units of the reference coupling.

    g1, g2 are the atom-field couplings, delta1, delta2 the cavity-atom
    detunings, J the photon hopping rate between the cavities, and n_bar1,
    n_bar2 the thermal occupations of the initial cavity fields.
    """

    g1: float = 1.0
    g2: float = 1.0
    delta1: float = 0.0
    delta2: float = 0.0
    J: float = 0.0
    n_bar1: float = 0.0
    n_bar2: float = 0.0

    def __post_init__(self):
        for name in ("g1", "g2", "delta1", "delta2", "J", "n_bar1", "n_bar2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
        if self.g1 < 0 or self.g2 < 0:
            raise ValueError("couplings g1, g2 must be nonnegative")
        if self.n_bar1 < 0 or self.n_bar2 < 0:
            raise ValueError("thermal occupations must be nonnegative")

    @classmethod
    def symmetric(cls, delta: float = 0.0, J: float = 0.0, n_bar: float = 0.0,
                  g: float = 1.0) -> "ModelParams":
        """Identical couplings, detunings and occupations for both cavities."""
        return cls(g1=g, g2=g, delta1=delta, delta2=delta, J=J, n_bar1=n_bar, n_bar2=n_bar)

    @property
    def is_symmetric(self) -> bool:
        return self.g1 == self.g2 and self.delta1 == self.delta2


@dataclass(frozen=True)
class HermitianBlock:
    """Hamiltonian restricted to one excitation sector."""

    N: int
    matrix: np.ndarray


def build_hamiltonian_block(params: ModelParams, sub: Subspace) -> HermitianBlock:
    """Assemble the Hamiltonian on one invariant sector in the local-mode picture.

    Matrix elements follow from operator action on each basis ket: detunings on
    the photon numbers, excitation swaps between each atom and its own cavity,
    and photon hopping between the cavities.  The result is real symmetric.
    """
    dim = sub.dim
    h = np.zeros((dim, dim))
    for j, s in enumerate(sub.basis):
        h[j, j] = params.delta1 * s.n1 + params.delta2 * s.n2
        # atom 1 absorbs / emits a cavity-1 photon
        if s.atom1 == GROUND and s.n1 >= 1:
            i = sub.position(BasisState(EXCITED, s.atom2, s.n1 - 1, s.n2))
            h[i, j] += params.g1 * math.sqrt(s.n1)
        if s.atom1 == EXCITED:
            i = sub.position(BasisState(GROUND, s.atom2, s.n1 + 1, s.n2))
            h[i, j] += params.g1 * math.sqrt(s.n1 + 1)
        # atom 2 and cavity 2
        if s.atom2 == GROUND and s.n2 >= 1:
            i = sub.position(BasisState(s.atom1, EXCITED, s.n1, s.n2 - 1))
            h[i, j] += params.g2 * math.sqrt(s.n2)
        if s.atom2 == EXCITED:
            i = sub.position(BasisState(s.atom1, GROUND, s.n1, s.n2 + 1))
            h[i, j] += params.g2 * math.sqrt(s.n2 + 1)
        # photon hopping
        if s.n2 >= 1:
            i = sub.position(BasisState(s.atom1, s.atom2, s.n1 + 1, s.n2 - 1))
            h[i, j] += params.J * math.sqrt((s.n1 + 1) * s.n2)
        if s.n1 >= 1:
            i = sub.position(BasisState(s.atom1, s.atom2, s.n1 - 1, s.n2 + 1))
            h[i, j] += params.J * math.sqrt(s.n1 * (s.n2 + 1))
    return HermitianBlock(N=sub.N, matrix=h)


def build_delocalized_block(params: ModelParams, sub: Subspace) -> HermitianBlock:
    """Same sector Hamiltonian written in the delocalized field modes.

    The symmetric and antisymmetric combinations of the two cavity modes
    diagonalize the hopping term; their detunings shift to delta +/- J and each
    couples to both atoms with strength g/sqrt(2) (antisymmetric mode with
    opposite sign on atom 2).  Requires g1 == g2 and delta1 == delta2.  Basis
    states reuse the photon labels (n1, n2) for the two delocalized modes.
    """
    if not params.is_symmetric:
        raise ValueError("delocalized form requires g1 == g2 and delta1 == delta2")
    g = params.g1
    c = g / math.sqrt(2.0)
    shift1 = params.delta1 + params.J
    shift2 = params.delta1 - params.J
    dim = sub.dim
    h = np.zeros((dim, dim))
    for j, s in enumerate(sub.basis):
        h[j, j] = shift1 * s.n1 + shift2 * s.n2
        # symmetric mode couples evenly to both atoms, antisymmetric mode with
        # opposite sign on atom 2
        for atom, anti_sign in ((1, 1.0), (2, -1.0)):
            level = s.atom1 if atom == 1 else s.atom2
            if level == GROUND:
                if s.n1 >= 1:
                    t = _with_atom(s, atom, EXCITED, dn1=-1)
                    h[sub.position(t), j] += c * math.sqrt(s.n1)
                if s.n2 >= 1:
                    t = _with_atom(s, atom, EXCITED, dn2=-1)
                    h[sub.position(t), j] += c * math.sqrt(s.n2) * anti_sign
            else:
                t = _with_atom(s, atom, GROUND, dn1=1)
                h[sub.position(t), j] += c * math.sqrt(s.n1 + 1)
                t = _with_atom(s, atom, GROUND, dn2=1)
                h[sub.position(t), j] += c * math.sqrt(s.n2 + 1) * anti_sign
    return HermitianBlock(N=sub.N, matrix=h)


def _with_atom(s: BasisState, atom: int, level: str, dn1: int = 0, dn2: int = 0) -> BasisState:
    a1 = level if atom == 1 else s.atom1
    a2 = level if atom == 2 else s.atom2
    return BasisState(a1, a2, s.n1 + dn1, s.n2 + dn2)


@dataclass(frozen=True)
class EffectiveParams:
    """Dispersive-limit rates: photon-independent Stark shift and atom-atom exchange.

    stark_shift is the common level shift, exchange_rate the coherent
    excitation-swap rate between the atoms mediated by the far-detuned
    delocalized modes.  dispersive_valid records whether both mode detunings
    dominate the thermally enhanced coupling by the requested ratio.
    """

    stark_shift: float
    exchange_rate: float
    mode1_detuning: float
    mode2_detuning: float
    dispersive_valid: bool


def effective_params(params: ModelParams, ratio_threshold: float = 10.0) -> EffectiveParams:
    """Second-order rates for the far-detuned (dispersive) regime.

    Raises ResonanceError if either delocalized mode is exactly resonant with
    the atoms, since the perturbative rates diverge there.
    """
    if not params.is_symmetric:
        raise ValueError("dispersive reduction requires g1 == g2 and delta1 == delta2")
    shift1 = params.delta1 + params.J
    shift2 = params.delta1 - params.J
    if shift1 == 0.0 or shift2 == 0.0:
        raise ResonanceError("delocalized mode resonant with the atomic transition")
    g = params.g1
    half = 0.5 * g * g
    lam = half / shift1 + half / shift2
    lam_prime = half / shift1 - half / shift2
    coupling1 = math.sqrt(params.n_bar1 + 1.0) * g / math.sqrt(2.0)
    coupling2 = math.sqrt(params.n_bar2 + 1.0) * g / math.sqrt(2.0)
    valid = (abs(shift1) >= ratio_threshold * coupling1
             and abs(shift2) >= ratio_threshold * coupling2)
    return EffectiveParams(stark_shift=lam, exchange_rate=lam_prime,
                           mode1_detuning=shift1, mode2_detuning=shift2,
                           dispersive_valid=valid)
