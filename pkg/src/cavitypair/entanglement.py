"""Two-qubit entanglement measures and auxiliary observables.

Works on 4x4 density matrices in the basis |ee>, |eg>, |ge>, |gg>.  The
dynamics here only ever populates the X pattern (diagonal plus the eg-ge and
ee-gg coherences), for which the concurrence has a closed form; the general
spectral formula is kept alongside as an independent route.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y).real  # real matrix, signs on the anti-diagonal

# Positions allowed to be nonzero in an X-form matrix.
_X_MASK = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [1, 0, 0, 1],
    ],
    dtype=bool,
)


class XEntries(NamedTuple):
    """Named entries of an X-form density matrix.

    A, B, C, D are the diagonal populations of |ee>, |eg>, |ge>, |gg>; E is the
    eg-ge coherence and G the ee-gg coherence.
    """

    A: float
    B: float
    C: float
    D: float
    E: complex
    G: complex


def is_x_form(rho: np.ndarray, tol: float = 1e-10) -> bool:
    """True when every element outside the X pattern is below tol in magnitude."""
    rho = np.asarray(rho)
    return bool(np.all(np.abs(rho[~_X_MASK]) <= tol))


def x_entries(rho: np.ndarray, tol: float = 1e-10) -> XEntries:
    if not is_x_form(rho, tol):
        raise ValueError("density matrix is not X-form within tolerance")
    return XEntries(
        A=float(rho[0, 0].real),
        B=float(rho[1, 1].real),
        C=float(rho[2, 2].real),
        D=float(rho[3, 3].real),
        E=complex(rho[1, 2]),
        G=complex(rho[0, 3]),
    )


def _check_state(rho: np.ndarray, psd_tol: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("expected a 4x4 two-qubit density matrix")
    if np.abs(rho - rho.conj().T).max() > 1e-8:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise ValueError("density matrix trace differs from one")
    if np.linalg.eigvalsh(rho).min() < -psd_tol:
        raise ValueError("density matrix has negativity beyond tolerance")
    return rho


def concurrence_general(rho: np.ndarray, psd_tol: float = 1e-10) -> float:
    """Concurrence from the singular values of tau = Psi^T (sy x sy) Psi.

    Psi holds the subnormalized eigenvectors sqrt(p_i) |v_i> of rho, and the
    Wootters lambdas are the singular values of the symmetric 4x4 tau.  Going
    through the SVD instead of sqrt(eig(rho rho_tilde)) avoids turning 1e-16
    rounding noise at zero eigenvalues into sqrt-sized 1e-8 artifacts, which
    matters for the rank-deficient states the dynamics produces.
    """
    rho = _check_state(rho, psd_tol)
    vals, vecs = np.linalg.eigh(rho)
    psi = vecs * np.sqrt(np.clip(vals, 0.0, None))
    tau = psi.T @ _SPIN_FLIP @ psi
    lam = np.linalg.svd(tau, compute_uv=False)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(max(c, 0.0), 1.0))


def concurrence_x(rho: np.ndarray, tol: float = 1e-10, psd_tol: float = 1e-10) -> float:
    """Closed-form concurrence for X-form states: 2 max(0, |E|-sqrt(AD), |G|-sqrt(BC))."""
    rho = _check_state(rho, psd_tol)
    e = x_entries(rho, tol)
    # tiny negative populations from clamping round to zero under the sqrt
    ad = max(e.A, 0.0) * max(e.D, 0.0)
    bc = max(e.B, 0.0) * max(e.C, 0.0)
    c = 2.0 * max(0.0, abs(e.E) - np.sqrt(ad), abs(e.G) - np.sqrt(bc))
    return float(min(c, 1.0))


def concurrence(rho: np.ndarray, x_tol: float = 1e-10) -> float:
    """Concurrence of a two-qubit state, using the X fast path when it applies."""
    if is_x_form(rho, x_tol):
        return concurrence_x(rho, x_tol)
    return concurrence_general(rho)


def population_inversion(rho: np.ndarray) -> float:
    """Expectation of sigma_z(1) + sigma_z(2); equals 2(A - D) for X states."""
    rho = np.asarray(rho)
    return float(2.0 * (rho[0, 0].real - rho[3, 3].real))


def partial_trace_fields(rho: np.ndarray, field_dims: tuple[int, int]) -> np.ndarray:
    """Trace a (4 * F1 * F2)-dimensional density matrix down to the two atoms.

    The full space is ordered atoms x field1 x field2.
    """
    f1, f2 = field_dims
    rho = np.asarray(rho)
    dim = 4 * f1 * f2
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix for field dims {field_dims}")
    return np.einsum("aijbij->ab", rho.reshape(4, f1, f2, 4, f1, f2))


def mean_photon(rho: np.ndarray, field_dims: tuple[int, int], mode: int) -> float:
    """Mean photon number of cavity mode 1 or 2 from a full-space density matrix."""
    if mode not in (1, 2):
        raise ValueError("mode must be 1 or 2")
    f1, f2 = field_dims
    dim = 4 * f1 * f2
    rho = np.asarray(rho)
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix for field dims {field_dims}")
    populations = np.diagonal(rho).real.reshape(4, f1, f2)
    if mode == 1:
        return float(np.einsum("aij,i->", populations, np.arange(f1, dtype=float)))
    return float(np.einsum("aij,j->", populations, np.arange(f2, dtype=float)))


def clamp_psd(rho: np.ndarray, tol: float = 1e-10, noise_floor: float = 1e-14) -> np.ndarray:
    """Zero out slightly negative eigenvalues and renormalize the trace.

    Negativity beyond tol is treated as an error.  Matrices whose smallest
    eigenvalue is above the noise floor are returned untouched so that exact
    structural zeros survive.
    """
    rho = np.asarray(rho, dtype=complex)
    vals, vecs = np.linalg.eigh(rho)
    low = vals.min()
    if low < -tol:
        raise ValueError(f"negativity {low:.3e} exceeds tolerance {tol:.1e}")
    if low >= -noise_floor:
        return rho
    clipped = np.clip(vals, 0.0, None)
    fixed = (vecs * clipped) @ vecs.conj().T
    return fixed / np.trace(fixed).real
