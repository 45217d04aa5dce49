"""Sector enumeration checked against brute-force enumeration of the product space."""

import itertools

import numpy as np
import pytest

from cavitypair.hilbert import BasisState, cutoff_for, enumerate_subspace


def brute_force_states(max_excitation):
    """All product states with total excitation <= max_excitation, built naively."""
    out = []
    for a1, a2 in itertools.product("ge", repeat=2):
        atom_exc = (a1 == "e") + (a2 == "e")
        for n1 in range(max_excitation + 1):
            for n2 in range(max_excitation + 1):
                if atom_exc + n1 + n2 <= max_excitation:
                    out.append((a1, a2, n1, n2))
    return set(out)


def test_dimensions():
    assert enumerate_subspace(0).dim == 1
    assert enumerate_subspace(1).dim == 4
    for n in range(2, 11):
        assert enumerate_subspace(n).dim == 4 * n


def test_single_excitation_order():
    basis = enumerate_subspace(1).basis
    expected = [
        BasisState("e", "g", 0, 0),
        BasisState("g", "e", 0, 0),
        BasisState("g", "g", 1, 0),
        BasisState("g", "g", 0, 1),
    ]
    assert list(basis) == expected


def test_vacuum_sector():
    basis = enumerate_subspace(0).basis
    assert list(basis) == [BasisState("g", "g", 0, 0)]


def test_sectors_partition_the_product_space():
    K = 10
    union = set()
    for N in range(K + 1):
        sub = enumerate_subspace(N)
        for s in sub.basis:
            assert s.excitation == N
            key = (s.atom1, s.atom2, s.n1, s.n2)
            assert key not in union, "state appeared in two sectors"
            union.add(key)
    assert union == brute_force_states(K)


def test_index_round_trip():
    for N in (0, 1, 2, 5, 8):
        sub = enumerate_subspace(N)
        for i, s in enumerate(sub.basis):
            assert sub.index[s] == i
            assert sub.position(s) == i


def test_enumeration_is_deterministic():
    a = enumerate_subspace(6)
    b = enumerate_subspace(6)
    assert a.basis == b.basis


def test_doubly_excited_group_content():
    sub = enumerate_subspace(4)
    sl = sub.sector_slice("e", "e")
    group = sub.basis[sl]
    assert len(group) == 3  # photon sum N-2 over two modes
    for s in group:
        assert s.atom1 == "e" and s.atom2 == "e"
        assert s.n1 + s.n2 == 2


def test_position_rejects_foreign_state():
    sub = enumerate_subspace(2)
    with pytest.raises(KeyError):
        sub.position(BasisState("g", "g", 0, 0))


def test_state_validation():
    with pytest.raises(ValueError):
        BasisState("x", "g", 0, 0)
    with pytest.raises(ValueError):
        BasisState("g", "g", -1, 0)
    with pytest.raises(ValueError):
        enumerate_subspace(-1)


def test_cutoff_anchors():
    # frozen reference points for the thermal truncation rule
    assert cutoff_for(0.1) == 5
    assert cutoff_for(1.0) == 15
    assert cutoff_for(10.0) == 60


def test_cutoff_monotone_and_bounded():
    grid = np.linspace(0.0, 12.0, 481)
    values = [cutoff_for(x) for x in grid]
    assert values[0] == 5
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_cutoff_rejects_negative():
    with pytest.raises(ValueError):
        cutoff_for(-0.5)
