"""Independent dense-space reference implementation used only by the tests.

Everything here is built the obvious slow way (plain kron operators on the
full atoms x field1 x field2 product space, matrix exponentials, loop-based
partial trace) so that the blockwise engine has something honest to disagree
with.
"""

import numpy as np
from scipy.linalg import expm

ATOM_COLUMN = {("e", "e"): 0, ("e", "g"): 1, ("g", "e"): 2, ("g", "g"): 3}
ATOM_AMPLITUDE_ORDER = [("e", "e"), ("e", "g"), ("g", "e"), ("g", "g")]


def dense_operators(n_max):
    sm = np.array([[0.0, 0.0], [1.0, 0.0]])  # |g><e| in basis (e, g)
    eye2 = np.eye(2)
    a = np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1)
    eyef = np.eye(n_max + 1)
    s1m = np.kron(np.kron(np.kron(sm, eye2), eyef), eyef)
    s2m = np.kron(np.kron(np.kron(eye2, sm), eyef), eyef)
    a1 = np.kron(np.kron(np.eye(4), a), eyef)
    a2 = np.kron(np.kron(np.eye(4), eyef), a)
    return s1m, s2m, a1, a2


def dense_hamiltonian(p, n_max):
    s1m, s2m, a1, a2 = dense_operators(n_max)
    h = p.delta1 * a1.T @ a1 + p.delta2 * a2.T @ a2
    h += p.g1 * (s1m.T @ a1 + a1.T @ s1m)
    h += p.g2 * (s2m.T @ a2 + a2.T @ s2m)
    h += p.J * (a1.T @ a2 + a2.T @ a1)
    return h


def embedding(sub, n_max):
    """Columns embed a sector basis into the dense product space."""
    f = n_max + 1
    P = np.zeros((4 * f * f, sub.dim))
    for col, s in enumerate(sub.basis):
        flat = (ATOM_COLUMN[(s.atom1, s.atom2)] * f + s.n1) * f + s.n2
        P[flat, col] = 1.0
    return P


def dense_initial_density(ensemble, n_max):
    """Full-space density matrix for a thermal trajectory ensemble."""
    f = n_max + 1
    dim = 4 * f * f
    rho = np.zeros((dim, dim), dtype=complex)
    amps = ensemble.atoms.amplitudes
    for traj in ensemble.trajectories:
        vec = np.zeros(dim, dtype=complex)
        for a_idx, pair in enumerate(ATOM_AMPLITUDE_ORDER):
            if amps[a_idx] != 0.0:
                flat = (ATOM_COLUMN[pair] * f + traj.n1) * f + traj.n2
                vec[flat] = amps[a_idx]
        rho += traj.weight * np.outer(vec, vec.conj())
    return rho


def dense_partial_trace(rho, n_max):
    """Loop-based trace over both field modes."""
    f = n_max + 1
    out = np.zeros((4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            total = 0.0 + 0.0j
            for n1 in range(f):
                for n2 in range(f):
                    i = (a * f + n1) * f + n2
                    j = (b * f + n1) * f + n2
                    total += rho[i, j]
            out[a, b] = total
    return out


def dense_reduced_evolution(params, ensemble, times, n_max):
    """rho_a(t) from brute-force propagation of the full density matrix."""
    h = dense_hamiltonian(params, n_max)
    rho0 = dense_initial_density(ensemble, n_max)
    out = np.zeros((len(times), 4, 4), dtype=complex)
    for k, t in enumerate(times):
        u = expm(-1j * h * t)
        out[k] = dense_partial_trace(u @ rho0 @ u.conj().T, n_max)
    return out
