"""Concurrence, partial trace and observables, cross-checked two ways."""

import numpy as np
import pytest

from cavitypair.entanglement import (
    clamp_psd,
    concurrence,
    concurrence_general,
    concurrence_x,
    is_x_form,
    mean_photon,
    partial_trace_fields,
    population_inversion,
    x_entries,
)
from cavitypair.states import atomic_state

BELL = atomic_state("bell_plus").density()


def random_density(rng, dim=4):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def random_x_density(rng):
    pops = rng.dirichlet(np.ones(4))
    a, b, c, d = pops
    e = rng.uniform(0.0, 1.0) * np.sqrt(b * c) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    g = rng.uniform(0.0, 1.0) * np.sqrt(a * d) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    rho = np.diag(pops).astype(complex)
    rho[1, 2], rho[2, 1] = e, np.conj(e)
    rho[0, 3], rho[3, 0] = g, np.conj(g)
    return rho


def x_matrix(a, b, c, d, e, g):
    rho = np.diag([a, b, c, d]).astype(complex)
    rho[1, 2], rho[2, 1] = e, np.conj(e)
    rho[0, 3], rho[3, 0] = g, np.conj(g)
    return rho


# ---------------------------------------------------------------------------
# concurrence


def test_bell_state_is_maximally_entangled():
    assert abs(concurrence_general(BELL) - 1.0) <= 1e-12
    assert abs(concurrence_x(BELL) - 1.0) <= 1e-12


def test_product_states_are_separable():
    for kind in ("e1e2", "e1g2", "g1e2", "g1g2"):
        rho = atomic_state(kind).density()
        assert concurrence_general(rho) <= 1e-12
        assert concurrence_x(rho) <= 1e-12


def test_werner_state_concurrence():
    eye = np.eye(4) / 4.0
    for p in np.linspace(0.0, 1.0, 21):
        rho = p * BELL + (1.0 - p) * eye
        expected = max(0.0, (3.0 * p - 1.0) / 2.0)
        assert concurrence_general(rho) == pytest.approx(expected, abs=1e-12)
    assert concurrence_general(0.5 * BELL + 0.5 * eye) == pytest.approx(0.25, abs=1e-12)


def test_x_fast_path_matches_general():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(1000):
        rho = random_x_density(rng)
        worst = max(worst, abs(concurrence_x(rho) - concurrence_general(rho)))
    assert worst <= 1e-10


def test_hand_computed_x_values():
    # |E| - sqrt(AD) = 0.4 - 0.1 dominates
    rho = x_matrix(0.1, 0.4, 0.4, 0.1, 0.4, 0.0)
    assert concurrence_x(rho) == pytest.approx(0.6, abs=1e-12)
    # both branches negative: separable plateau
    rho = x_matrix(0.25, 0.25, 0.25, 0.25, 0.05, 0.05)
    assert concurrence_x(rho) == 0.0
    # ee-gg coherence branch
    rho = x_matrix(0.5, 0.0, 0.0, 0.5, 0.0, 0.5)
    assert concurrence_x(rho) == pytest.approx(1.0, abs=1e-12)


def test_concurrence_local_unitary_invariance():
    rng = np.random.default_rng(9)
    for _ in range(25):
        rho = random_density(rng)
        u1, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        u2, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        u = np.kron(u1, u2)
        before = concurrence_general(rho)
        after = concurrence_general(u @ rho @ u.conj().T)
        assert abs(before - after) <= 1e-10


def test_concurrence_range():
    rng = np.random.default_rng(17)
    for _ in range(200):
        c = concurrence_general(random_density(rng))
        assert 0.0 <= c <= 1.0


def test_dispatcher_uses_both_paths():
    rng = np.random.default_rng(1)
    x = random_x_density(rng)
    assert concurrence(x) == pytest.approx(concurrence_x(x), abs=1e-12)
    full = random_density(rng)
    if not is_x_form(full):
        assert concurrence(full) == pytest.approx(concurrence_general(full), abs=1e-12)


def test_non_x_rejected_by_fast_path():
    rho = np.eye(4, dtype=complex) / 4.0
    rho[0, 1] = rho[1, 0] = 0.1
    with pytest.raises(ValueError):
        concurrence_x(rho)


def test_state_validation_errors():
    bad_trace = np.eye(4) / 2.0
    with pytest.raises(ValueError):
        concurrence_general(bad_trace)
    not_hermitian = np.eye(4) / 4.0 + 0.0j
    not_hermitian[0, 1] = 0.3
    with pytest.raises(ValueError):
        concurrence_general(not_hermitian)
    negative = np.diag([1.2, 0.1, -0.2, -0.1]).astype(complex)
    with pytest.raises(ValueError):
        concurrence_general(negative)


def test_x_entries_named_fields():
    rho = x_matrix(0.1, 0.2, 0.3, 0.4, 0.1j, 0.05)
    e = x_entries(rho)
    assert (e.A, e.B, e.C, e.D) == (0.1, 0.2, 0.3, 0.4)
    assert e.E == 0.1j and e.G == 0.05


# ---------------------------------------------------------------------------
# partial trace and observables


def test_partial_trace_of_product_state():
    rng = np.random.default_rng(3)
    atoms = random_density(rng, 4)
    f1 = random_density(rng, 3)
    f2 = random_density(rng, 2)
    full = np.kron(np.kron(atoms, f1), f2)
    reduced = partial_trace_fields(full, (3, 2))
    assert np.abs(reduced - atoms).max() < 1e-13


def test_partial_trace_kills_mismatched_field_coherence():
    # (|eg>|10> + |ge>|01>)/sqrt(2): field labels differ, so no atomic coherence
    f = 2
    psi = np.zeros(4 * f * f, dtype=complex)
    psi[(1 * f + 1) * f + 0] = 1.0 / np.sqrt(2.0)  # |eg>|1,0>
    psi[(2 * f + 0) * f + 1] = 1.0 / np.sqrt(2.0)  # |ge>|0,1>
    reduced = partial_trace_fields(np.outer(psi, psi.conj()), (f, f))
    expected = np.diag([0.0, 0.5, 0.5, 0.0])
    assert np.abs(reduced - expected).max() < 1e-14


def test_partial_trace_is_linear():
    rng = np.random.default_rng(8)
    r1 = random_density(rng, 4 * 2 * 3)
    r2 = random_density(rng, 4 * 2 * 3)
    lhs = partial_trace_fields(0.3 * r1 + 0.7 * r2, (2, 3))
    rhs = 0.3 * partial_trace_fields(r1, (2, 3)) + 0.7 * partial_trace_fields(r2, (2, 3))
    assert np.abs(lhs - rhs).max() < 1e-13


def test_population_inversion_extremes():
    assert population_inversion(atomic_state("e1e2").density()) == pytest.approx(2.0)
    assert population_inversion(atomic_state("g1g2").density()) == pytest.approx(-2.0)
    assert population_inversion(BELL) == pytest.approx(0.0)
    assert population_inversion(atomic_state("e1g2").density()) == pytest.approx(0.0)


def test_mean_photon_from_product_state():
    pops1 = np.array([0.5, 0.3, 0.2])
    pops2 = np.array([0.6, 0.4])
    full = np.kron(np.kron(atomic_state("g1g2").density(), np.diag(pops1)), np.diag(pops2))
    assert mean_photon(full, (3, 2), 1) == pytest.approx(0.3 + 2 * 0.2)
    assert mean_photon(full, (3, 2), 2) == pytest.approx(0.4)
    with pytest.raises(ValueError):
        mean_photon(full, (3, 2), 3)


def test_clamp_psd():
    vecs = np.linalg.qr(np.random.default_rng(0).normal(size=(4, 4)))[0]
    rho = vecs @ np.diag([0.7, 0.3, 5e-11, -5e-11]) @ vecs.T
    fixed = clamp_psd(rho, tol=1e-10)
    assert np.linalg.eigvalsh(fixed).min() >= -1e-15
    assert np.trace(fixed).real == pytest.approx(1.0, abs=1e-12)
    clean = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    assert np.abs(clamp_psd(clean) - clean).max() == 0.0
    bad = vecs @ np.diag([0.8, 0.2, 1e-9, -1e-9]) @ vecs.T
    with pytest.raises(ValueError):
        clamp_psd(bad, tol=1e-10)
