"""Brute-force validation of the closed-form evolution.

Two independent witnesses check the analytic amplitudes: direct RK4 stepping
of the Schrodinger equation in each excitation manifold, and spectral
propagation through Jacobi eigendecompositions of the 4x4 manifold blocks.
The analytic path is trusted only where it matches both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import get_backend
from .dynamics import CouplingParams, JointState
from .errors import NumericalFaultError, StepSizeError
from .field import FockExpansion

# RK4 stability/accuracy guard: steps must resolve the fastest manifold
MAX_PHASE_PER_STEP = 0.1


@dataclass(frozen=True)
class ManifoldHamiltonian:
    """One 4x4 excitation-manifold block of the interaction Hamiltonian."""

    n: int
    matrix: np.ndarray


def build_manifold_hamiltonian(n: int, cpl: CouplingParams) -> ManifoldHamiltonian:
    """Tridiagonal block with off-diagonals (g sqrt(n), lam, g sqrt(n+1)).

    Basis (|e1 e2, n-1>, |e1 g2, n>, |g1 e2, n>, |g1 g2, n+1>); for n = 0 the
    first coupling g*sqrt(0) vanishes, which zeroes the row and column of the
    nonexistent ket.
    """
    if n < 0:
        raise ValueError("manifold index must be >= 0")
    a_n = cpl.g * math.sqrt(n)
    b_n = cpl.g * math.sqrt(n + 1)
    m = np.zeros((4, 4))
    m[0, 1] = m[1, 0] = a_n
    m[1, 2] = m[2, 1] = cpl.lam
    m[2, 3] = m[3, 2] = b_n
    return ManifoldHamiltonian(n=n, matrix=m)


def jacobi_eigh(matrix: np.ndarray, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a small real symmetric matrix by cyclic Jacobi.

    Returns (eigenvalues ascending, column eigenvectors).  Unconditionally
    convergent for symmetric input; raises if the off-diagonal mass has not
    vanished after ``max_sweeps`` sweeps.
    """
    a = np.array(matrix, dtype=np.float64)
    size = a.shape[0]
    vec = np.eye(size)
    scale = max(1.0, float(np.max(np.abs(a))))
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[p, q] ** 2 for p in range(size) for q in range(p + 1, size)))
        if off <= 1e-15 * scale:
            order = np.argsort(np.diag(a))
            return np.diag(a)[order], vec[:, order]
        for p in range(size):
            for q in range(p + 1, size):
                if abs(a[p, q]) <= 1e-18 * scale:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(size)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                vec = vec @ rot
    raise NumericalFaultError("Jacobi eigensolver did not converge")


def _spectral_decompositions(expansion: FockExpansion, cpl: CouplingParams):
    decomps = []
    for n in range(expansion.n_max + 1):
        block = build_manifold_hamiltonian(n, cpl)
        try:
            energies, vectors = jacobi_eigh(block.matrix)
        except NumericalFaultError as err:
            raise NumericalFaultError(f"eigensolver failed on manifold n = {n}: {err}") from err
        decomps.append((energies, vectors))
    return decomps


def spectral_state_series(
    expansion: FockExpansion, cpl: CouplingParams, times
) -> list[JointState]:
    """Exact states at several times from per-manifold eigendecompositions."""
    times = np.asarray(times, dtype=np.float64)
    decomps = _spectral_decompositions(expansion, cpl)
    states = []
    for t in times:
        amps = np.empty((expansion.n_max + 1, 4), dtype=np.complex128)
        for n, (energies, vectors) in enumerate(decomps):
            # initial condition e_1 (the |e1 g2, n> ket)
            amps[n] = vectors @ (np.exp(-1j * energies * t) * vectors[1, :])
        states.append(JointState(time=float(t), weights=expansion, amps=amps))
    return states


def spectral_propagate(expansion: FockExpansion, cpl: CouplingParams, t: float) -> JointState:
    """Propagate to one time by eigendecomposing each manifold block."""
    if t < 0:
        raise ValueError("time must be >= 0")
    return spectral_state_series(expansion, cpl, [t])[0]


def _rk4_run(expansion: FockExpansion, cpl: CouplingParams, times, dt: float, backend):
    times = np.asarray(times, dtype=np.float64)
    ns = np.arange(expansion.n_max + 1, dtype=np.float64)
    an = cpl.g * np.sqrt(ns)
    bn = cpl.g * np.sqrt(ns + 1.0)
    # fastest frequency of the truncated problem
    g2, l2 = cpl.g**2, cpl.lam**2
    n_top = float(expansion.n_max)
    r_top = math.sqrt((g2 + l2) ** 2 + 4.0 * n_top * g2 * l2)
    omega_max = math.sqrt(0.5 * ((2.0 * n_top + 1.0) * g2 + l2 + r_top))
    if dt * omega_max >= MAX_PHASE_PER_STEP:
        raise StepSizeError(
            f"dt = {dt} too coarse: dt * omega_max = {dt * omega_max:.3f} >= {MAX_PHASE_PER_STEP}"
        )
    kern = backend if backend is not None else get_backend()
    return kern.rk4_states(an, bn, cpl.lam, times, dt)


def numeric_state_series(
    expansion: FockExpansion, cpl: CouplingParams, times, dt: float, backend=None
) -> list[JointState]:
    """RK4-stepped states at several (nondecreasing) times in one pass."""
    times = np.asarray(times, dtype=np.float64)
    if times.size == 0 or times[0] < 0 or (times.size > 1 and np.min(np.diff(times)) < 0):
        raise ValueError("output times must be nondecreasing and >= 0")
    stack, drift = _rk4_run(expansion, cpl, times, dt, backend)
    return [
        JointState(time=float(t), weights=expansion, amps=stack[k], norm_drift=float(drift))
        for k, t in enumerate(times)
    ]


def propagate_numeric(
    expansion: FockExpansion, cpl: CouplingParams, t_end: float, dt: float, backend=None
) -> JointState:
    """Fourth-order explicit stepping of the manifold Schrodinger equations.

    Norm drift accumulated by the integrator is recorded on the returned
    state (``norm_drift``), never renormalized away.
    """
    if t_end < 0:
        raise ValueError("t_end must be >= 0")
    return numeric_state_series(expansion, cpl, [t_end], dt, backend)[0]


def rk4_step_for(omega_max: float, t_end: float, budget: float = 1e-8, safety: float = 0.7) -> float:
    """Step size meeting an amplitude-error budget over [0, t_end].

    RK4 phase error accumulates as t * omega^5 * dt^4 / 120 for a mode at
    frequency omega; inverting for dt and applying the safety factor keeps
    the worst (fastest) manifold within budget.  Also respects the
    dt * omega < 0.1 stability guard.
    """
    if omega_max <= 0.0 or t_end <= 0.0:
        return MAX_PHASE_PER_STEP
    dt_accuracy = (budget * 120.0 / (t_end * omega_max**5)) ** 0.25
    return safety * min(dt_accuracy, MAX_PHASE_PER_STEP / omega_max)


def compare_states(a: JointState, b: JointState) -> float:
    """Largest absolute amplitude deviation over all manifolds and channels."""
    if a.amps.shape != b.amps.shape:
        raise ValueError(
            f"state shapes differ: {a.amps.shape} vs {b.amps.shape} (grids/truncation must match)"
        )
    return float(np.max(np.abs(a.amps - b.amps)))
