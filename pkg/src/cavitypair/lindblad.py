"""Master-equation propagation with cavity loss and atomic decay.

Both cavities leak photons and both atoms decay into reservoirs of occupation
n_bar, each damping channel paired with the matching thermal pump.  The state
lives on the dense product space atoms x field1 x field2 with a per-mode Fock
truncation; propagation is deterministic fixed-step RK4.

The right-hand side is evaluated as operator products (one non-Hermitian drift
matrix plus sparse jump terms), which is algebraically identical to applying
the vectorized superoperator; build_superoperator exposes the latter and the
tests check the two agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .entanglement import clamp_psd, mean_photon, partial_trace_fields
from .model import ModelParams
from .states import AtomicInitialState, ThermalSpec


class TraceDriftError(RuntimeError):
    """Integration lost probability beyond tolerance (step too large or space too tight)."""


class StepUnderflowError(RuntimeError):
    """The stability-limited step collapsed to zero; rates are out of range."""


@dataclass(frozen=True)
class DissipationParams:
    """Damping rates in units of g: cavity linewidth kappa, atomic decay gamma.

    n_bar is the reservoir occupation shared by both kinds of channel; each
    loss term at rate r(n_bar + 1) comes with a pump term at rate r n_bar.
    """

    kappa: float = 0.0
    gamma: float = 0.0
    n_bar: float = 0.0

    def __post_init__(self):
        for name in ("kappa", "gamma", "n_bar"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative")


def rates_from_cooperative(cooperative: float, gamma_over_kappa: float,
                           g: float = 1.0) -> tuple[float, float]:
    """Solve g^2/(kappa*gamma) = cooperative at a fixed gamma/kappa ratio."""
    if cooperative <= 0 or gamma_over_kappa <= 0:
        raise ValueError("cooperative parameter and rate ratio must be positive")
    kappa = g / math.sqrt(cooperative * gamma_over_kappa)
    return kappa, gamma_over_kappa * kappa


class FullSpace:
    """Operator cache for the truncated product space atoms x field1 x field2."""

    def __init__(self, n_max1: int, n_max2: int):
        if n_max1 < 0 or n_max2 < 0:
            raise ValueError("Fock cutoffs must be nonnegative")
        self.n_max1 = int(n_max1)
        self.n_max2 = int(n_max2)
        f1, f2 = self.n_max1 + 1, self.n_max2 + 1
        self.field_dims = (f1, f2)
        self.dim = 4 * f1 * f2

        lower = np.array([[0.0, 0.0], [1.0, 0.0]])  # |g><e| in basis (e, g)
        eye2 = sp.identity(2, format="csr")
        a1 = sp.diags(np.sqrt(np.arange(1, f1)), offsets=1, format="csr")
        a2 = sp.diags(np.sqrt(np.arange(1, f2)), offsets=1, format="csr")
        eyef1 = sp.identity(f1, format="csr")
        eyef2 = sp.identity(f2, format="csr")
        atom1 = sp.kron(sp.csr_matrix(lower), eye2, format="csr")
        atom2 = sp.kron(eye2, sp.csr_matrix(lower), format="csr")
        eye4 = sp.identity(4, format="csr")

        def lift(atom_op, f1_op, f2_op):
            return sp.kron(sp.kron(atom_op, f1_op, format="csr"), f2_op, format="csr")

        self.s1m = lift(atom1, eyef1, eyef2)
        self.s2m = lift(atom2, eyef1, eyef2)
        self.a1 = lift(eye4, a1, eyef2)
        self.a2 = lift(eye4, eyef1, a2)

    def hamiltonian(self, params: ModelParams) -> np.ndarray:
        """Dense Hamiltonian on the truncated space (units of g)."""
        h = params.delta1 * (self.a1.T @ self.a1) + params.delta2 * (self.a2.T @ self.a2)
        h = h + params.g1 * (self.s1m.T @ self.a1 + self.a1.T @ self.s1m)
        h = h + params.g2 * (self.s2m.T @ self.a2 + self.a2.T @ self.s2m)
        h = h + params.J * (self.a1.T @ self.a2 + self.a2.T @ self.a1)
        return np.asarray(h.todense())


def collapse_channels(diss: DissipationParams, space: FullSpace) -> list:
    """(rate, jump operator) pairs; zero-rate channels are dropped."""
    channels = []
    for op in (space.a1, space.a2):
        channels.append((diss.kappa * (diss.n_bar + 1.0), op))
        channels.append((diss.kappa * diss.n_bar, op.T.tocsr()))
    for op in (space.s1m, space.s2m):
        channels.append((diss.gamma * (diss.n_bar + 1.0), op))
        channels.append((diss.gamma * diss.n_bar, op.T.tocsr()))
    return [(rate, op) for rate, op in channels if rate > 0.0]


def _drift_matrix(h: np.ndarray, channels: list) -> np.ndarray:
    """A = -iH - (1/2) sum_r r L^dag L; the RHS is A rho + rho A^dag + jumps."""
    a = -1j * h.astype(complex)
    for rate, op in channels:
        a -= 0.5 * rate * np.asarray((op.T.conj() @ op).todense())
    return a


def _rhs(rho: np.ndarray, drift: np.ndarray, drift_dag: np.ndarray, channels: list) -> np.ndarray:
    out = drift @ rho
    out += rho @ drift_dag
    for rate, op in channels:
        jump = op @ rho
        # (L rho) L^dag written with left-multiplications only; (L X^dag)^dag = X L^dag
        out += rate * (op @ jump.conj().T).conj().T
    return out


def lindblad_rhs(params: ModelParams, diss: DissipationParams, rho: np.ndarray,
                 space: FullSpace) -> np.ndarray:
    """Time derivative of rho under the master equation (test and reference use)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (space.dim, space.dim):
        raise ValueError("density matrix does not match the space dimension")
    channels = collapse_channels(diss, space)
    drift = _drift_matrix(space.hamiltonian(params), channels)
    return _rhs(rho, drift, drift.conj().T, channels)


def build_superoperator(params: ModelParams, diss: DissipationParams,
                        space: FullSpace) -> sp.csr_matrix:
    """Vectorized generator acting on row-major vec(rho)."""
    d = space.dim
    eye = sp.identity(d, format="csr")
    h = sp.csr_matrix(space.hamiltonian(params))
    gen = -1j * (sp.kron(h, eye, format="csr") - sp.kron(eye, h.T, format="csr"))
    for rate, op in collapse_channels(diss, space):
        opdag_op = (op.T.conj() @ op).tocsr()
        gen = gen + rate * (
            sp.kron(op, op.conj(), format="csr")
            - 0.5 * sp.kron(opdag_op, eye, format="csr")
            - 0.5 * sp.kron(eye, opdag_op.T, format="csr")
        )
    return gen.tocsr()


def thermal_product_state(atoms: AtomicInitialState, field1: ThermalSpec,
                          field2: ThermalSpec, space: FullSpace) -> tuple[np.ndarray, float]:
    """Initial density matrix atoms x thermal x thermal embedded in the space.

    Thermal weights are truncated at each spec's cutoff (which must fit inside
    the space) and renormalized; the raw retained probability is returned.
    """
    if field1.cutoff > space.n_max1 or field2.cutoff > space.n_max2:
        raise ValueError("thermal cutoff exceeds the space truncation")
    f1, f2 = space.field_dims
    w1 = np.zeros(f1)
    w2 = np.zeros(f2)
    w1[: field1.cutoff + 1] = field1.weights()
    w2[: field2.cutoff + 1] = field2.weights()
    mass = w1.sum() * w2.sum()
    rho = np.kron(np.kron(atoms.density(), np.diag(w1 / w1.sum())), np.diag(w2 / w2.sum()))
    return rho.astype(complex), float(mass)


def _step_scale(h: np.ndarray, channels: list) -> float:
    """Fastest generator frequency: spectral spread of H plus damping diagonal."""
    energies = np.linalg.eigvalsh(h)
    spread = float(energies[-1] - energies[0])
    damping = 0.0
    for rate, op in channels:
        damping += rate * float((op.T.conj() @ op).diagonal().real.max())
    return spread + damping


@dataclass
class MasterResult:
    """Reduced dynamics from the master equation, plus bookkeeping."""

    times: np.ndarray
    rho_atoms: np.ndarray  # (n_times, 4, 4)
    mean_photon1: np.ndarray
    mean_photon2: np.ndarray
    trace_error: float
    full: np.ndarray | None = None


def integrate_master_equation(params: ModelParams, diss: DissipationParams,
                              rho0: np.ndarray, grid, space: FullSpace,
                              dt: float | None = None, step_scale: float = 0.2,
                              keep_full: bool = False, trace_tol: float = 1e-8,
                              psd_tol: float = 1e-7) -> MasterResult:
    """Propagate rho0 through the grid times with fixed-step RK4.

    Parameters
    ----------
    dt : float, optional
        Step target; defaults to step_scale divided by the fastest generator
        frequency.  Each sample interval is subdivided evenly so the samples
        are hit exactly.
    keep_full : bool
        Also return the full density matrix at every sample.
    trace_tol : float
        Largest tolerated |tr(rho) - 1| over the run.
    psd_tol : float
        Reduced-state negativity below this is integration noise and is
        clamped; anything larger is an error.  Looser than the unitary
        engine's bound because RK4 leaves O(step^4) residuals.
    """
    rho = np.array(rho0, dtype=complex)
    if rho.shape != (space.dim, space.dim):
        raise ValueError("initial state does not match the space dimension")
    times = np.asarray(grid.samples if hasattr(grid, "samples") else grid, dtype=float)
    channels = collapse_channels(diss, space)
    hamiltonian = space.hamiltonian(params)
    drift = _drift_matrix(hamiltonian, channels)
    drift_dag = drift.conj().T

    if dt is None:
        scale = _step_scale(hamiltonian, channels)
        dt = step_scale / scale if scale > 1e-12 else float("inf")
    if dt <= 0.0 or math.isnan(dt):
        raise StepUnderflowError("step size must be positive")

    n_t = times.size
    rho_atoms = np.zeros((n_t, 4, 4), dtype=complex)
    mp1 = np.zeros(n_t)
    mp2 = np.zeros(n_t)
    full = np.zeros((n_t, space.dim, space.dim), dtype=complex) if keep_full else None

    worst_trace = 0.0
    t_now = 0.0
    for k, t_target in enumerate(times):
        span = t_target - t_now
        if span > 0.0:
            n_steps = max(1, int(math.ceil(span / dt)))
            if n_steps > 10**8:
                raise StepUnderflowError("interval requires an absurd number of steps")
            h = span / n_steps
            for _ in range(n_steps):
                k1 = _rhs(rho, drift, drift_dag, channels)
                k2 = _rhs(rho + 0.5 * h * k1, drift, drift_dag, channels)
                k3 = _rhs(rho + 0.5 * h * k2, drift, drift_dag, channels)
                k4 = _rhs(rho + h * k3, drift, drift_dag, channels)
                rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                rho = 0.5 * (rho + rho.conj().T)
            t_now = t_target
        trace = np.trace(rho).real
        worst_trace = max(worst_trace, abs(trace - 1.0))
        # RK4 conserves the trace identically, so blowup shows as non-finite or
        # oversized entries rather than trace loss; guard both
        diverged = not np.isfinite(trace) or np.abs(rho).max() > 10.0
        if diverged or worst_trace > trace_tol:
            raise TraceDriftError(
                f"state diverged or |trace - 1| = {worst_trace:.3e} "
                f"at gt = {t_target:g} (tolerance {trace_tol:.1e})"
            )
        reduced = partial_trace_fields(rho, space.field_dims)
        rho_atoms[k] = clamp_psd(reduced, tol=psd_tol)
        mp1[k] = mean_photon(rho, space.field_dims, 1)
        mp2[k] = mean_photon(rho, space.field_dims, 2)
        if keep_full:
            full[k] = rho

    return MasterResult(times=times, rho_atoms=rho_atoms, mean_photon1=mp1,
                        mean_photon2=mp2, trace_error=worst_trace, full=full)
