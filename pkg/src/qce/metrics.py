"""Reduced density matrices and the dynamical observables built from them.

Everything here works in the fixed two-qubit basis (ee, eg, ge, gg).  The
observables are the qubit-1 linear entropy S and atomic inversion W, the
two-qubit concurrence and l1-norm of coherence, and the running time average
of S.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .backend import get_backend
from .dynamics import CouplingParams, JointState, amplitude_constants
from .errors import NumericalFaultError
from .field import FockExpansion

# sigma_y (x) sigma_y in the (ee, eg, ge, gg) basis: a real anti-diagonal sign matrix
SPIN_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)

TRACE_TOL = 1e-8
EIGEN_CLAMP = 1e-10


@dataclass(frozen=True)
class TwoQubitDensity:
    """Validated 4x4 density matrix in the (ee, eg, ge, gg) basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise NumericalFaultError("density matrix is not Hermitian within 1e-10")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL:
            raise NumericalFaultError(
                f"density-matrix trace {np.trace(m).real!r} deviates from 1 by more than {TRACE_TOL}"
            )
        if np.min(np.linalg.eigvalsh(m)) < -EIGEN_CLAMP:
            raise NumericalFaultError("density matrix has an eigenvalue below -1e-10")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class QubitDensity:
    """Reduced qubit-1 state: populations and the single coherence."""

    rho_ee: float
    rho_gg: float
    rho_eg: complex

    def __post_init__(self):
        if abs(self.rho_ee + self.rho_gg - 1.0) > 1e-10:
            raise NumericalFaultError("qubit populations do not sum to 1 within 1e-10")
        if abs(self.rho_eg) ** 2 > self.rho_ee * self.rho_gg + 1e-10:
            raise NumericalFaultError("qubit coherence exceeds the population bound")


@dataclass(frozen=True)
class MetricsSample:
    """All scalar observables at one time."""

    time: float
    entropy: float
    inversion: float
    concurrence: float
    coherence_l1: float


@dataclass(frozen=True)
class TimeSeries:
    """Observables on a time grid, stored column-wise as arrays.

    cumulative_entropy[k] is the running average (1/t_k) * int_0^{t_k} S dt
    (trapezoidal rule), with the t -> 0 limit S(0) at the first grid point.
    """

    grid: np.ndarray
    entropy: np.ndarray
    inversion: np.ndarray
    concurrence: np.ndarray
    coherence_l1: np.ndarray
    cumulative_entropy: np.ndarray

    def sample(self, k: int) -> MetricsSample:
        return MetricsSample(
            time=float(self.grid[k]),
            entropy=float(self.entropy[k]),
            inversion=float(self.inversion[k]),
            concurrence=float(self.concurrence[k]),
            coherence_l1=float(self.coherence_l1[k]),
        )

    @cached_property
    def samples(self) -> tuple[MetricsSample, ...]:
        return tuple(self.sample(k) for k in range(self.grid.size))


def _basis_amplitudes(state: JointState) -> tuple[np.ndarray, ...]:
    """Physical amplitudes (u, v, x, y) on the four ket families."""
    w = state.weights.weights
    return (w * state.amps[:, 0], w * state.amps[:, 1], w * state.amps[:, 2], w * state.amps[:, 3])


def _reduce_density(u, v, x, y) -> np.ndarray:
    """Trace over the field: 4x4 density from the per-manifold amplitudes.

    The |e1 e2> component of field level n comes from manifold n+1 and the
    |g1 g2> component from manifold n-1, hence the index shifts.
    """
    rho = np.empty((4, 4), dtype=np.complex128)
    rho[0, 0] = np.sum(np.abs(u) ** 2)
    rho[1, 1] = np.sum(np.abs(v) ** 2)
    rho[2, 2] = np.sum(np.abs(x) ** 2)
    rho[3, 3] = np.sum(np.abs(y) ** 2)
    rho[0, 1] = np.sum(u[1:] * np.conj(v[:-1]))
    rho[0, 2] = np.sum(u[1:] * np.conj(x[:-1]))
    rho[0, 3] = np.sum(u[2:] * np.conj(y[:-2]))
    rho[1, 2] = np.sum(v * np.conj(x))
    rho[1, 3] = np.sum(v[1:] * np.conj(y[:-1]))
    rho[2, 3] = np.sum(x[1:] * np.conj(y[:-1]))
    for i in range(1, 4):
        for j in range(i):
            rho[i, j] = np.conj(rho[j, i])
    return rho


def two_qubit_density(state: JointState) -> TwoQubitDensity:
    """Two-qubit density matrix of a joint state, traced over the field."""
    return TwoQubitDensity(_reduce_density(*_basis_amplitudes(state)))


def qubit1_density(state: JointState) -> QubitDensity:
    """Qubit-1 reduced state from the three direct manifold sums."""
    u, v, x, y = _basis_amplitudes(state)
    rho_gg = float(np.sum(np.abs(x) ** 2 + np.abs(y) ** 2))
    rho_ee = float(np.sum(np.abs(u) ** 2 + np.abs(v) ** 2))
    rho_eg = complex(np.sum(u[1:] * np.conj(x[:-1])) + np.sum(v[1:] * np.conj(y[:-1])))
    return QubitDensity(rho_ee=rho_ee, rho_gg=rho_gg, rho_eg=rho_eg)


def partial_trace_qubit1(rho: TwoQubitDensity) -> QubitDensity:
    """Qubit-1 state by tracing qubit 2 out of the two-qubit density."""
    m = rho.matrix
    return QubitDensity(
        rho_ee=float((m[0, 0] + m[1, 1]).real),
        rho_gg=float((m[2, 2] + m[3, 3]).real),
        rho_eg=complex(m[0, 2] + m[1, 3]),
    )


def atomic_inversion(q: QubitDensity) -> float:
    """W = 1 - 2 rho_gg, the qubit-1 population difference."""
    return 1.0 - 2.0 * q.rho_gg


def linear_entropy(q: QubitDensity) -> float:
    """Qubit-1 linear entropy, S = 1/2 - W^2/2 - 2|rho_eg|^2.

    0 for pure states, 1/2 for the maximally mixed qubit.
    """
    w = atomic_inversion(q)
    return 0.5 - 0.5 * w**2 - 2.0 * abs(q.rho_eg) ** 2


def wootters_values(matrices: np.ndarray) -> np.ndarray:
    """Square roots of the spin-flip spectrum, sorted descending.

    For rho with factorization rho = L L^dagger, the eigenvalues of
    rho (sy x sy) rho* (sy x sy) equal the squared singular values of the
    complex symmetric matrix K = L^T (sy x sy) L.  Computing singular values
    of K instead of eigenvalues of the product matrix keeps the small values
    accurate at the 1e-15 level instead of sqrt(eps); spurious roots of the
    product-matrix route would otherwise contaminate near-pure states.

    Accepts a (..., 4, 4) stack; returns (..., 4) descending values.
    """
    matrices = np.asarray(matrices, dtype=np.complex128)
    try:
        d, basis = np.linalg.eigh(matrices)
    except np.linalg.LinAlgError as err:
        raise NumericalFaultError(f"eigen-solver failed on the density matrix: {err}") from err
    if float(np.min(d)) < -EIGEN_CLAMP:
        where = np.unravel_index(int(np.argmin(d)), d.shape)[:-1]
        raise NumericalFaultError(
            f"density matrix has an eigenvalue below -1e-10 (stack index {where})"
        )
    factor = basis * np.sqrt(np.clip(d, 0.0, None))[..., None, :]
    k_matrix = np.swapaxes(factor, -1, -2) @ SPIN_FLIP @ factor
    try:
        return np.linalg.svd(k_matrix, compute_uv=False)
    except np.linalg.LinAlgError as err:
        raise NumericalFaultError(f"SVD failed in the concurrence evaluation: {err}") from err


def spin_flip_spectrum(rho: TwoQubitDensity) -> np.ndarray:
    """Eigenvalues of M = rho (sy x sy) rho* (sy x sy), descending.

    Diagnostic route via the characteristic polynomial of M (Newton-Girard
    coefficients from traces of powers, companion-matrix roots, two Newton
    refinement passes).  The spectrum is analytically real and nonnegative;
    residues beyond the 1e-8 imaginary / -1e-10 negative thresholds raise.
    """
    m = rho.matrix
    product = m @ SPIN_FLIP @ m.conj() @ SPIN_FLIP
    p1 = np.trace(product)
    p2 = np.trace(product @ product)
    p3 = np.trace(product @ product @ product)
    p4 = np.trace(np.linalg.matrix_power(product, 4))
    if max(abs(p.imag) for p in (p1, p2, p3, p4)) > 1e-8:
        raise NumericalFaultError("spin-flip product matrix has non-real trace powers")
    p1, p2, p3, p4 = (p.real for p in (p1, p2, p3, p4))
    e1 = p1
    e2 = (e1 * p1 - p2) / 2.0
    e3 = (e2 * p1 - e1 * p2 + p3) / 3.0
    e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0
    coeffs = np.array([1.0, -e1, e2, -e3, e4])
    roots = np.roots(coeffs)

    def poly_at(x):
        return ((x + coeffs[1]) * x + coeffs[2]) * x * x + coeffs[3] * x + coeffs[4]

    # roots are analytically real; multiple roots surface from np.roots as
    # tight complex clusters, so judge realness by backward error: the real
    # part must leave only a rounding-level polynomial residual
    vals = roots.real
    magnitude = np.abs(vals)
    bound = ((magnitude + abs(coeffs[1])) * magnitude + abs(coeffs[2])) * magnitude**2 + abs(
        coeffs[3]
    ) * magnitude + abs(coeffs[4])
    spurious = np.abs(poly_at(vals)) <= 1e-10 * np.maximum(bound, 1e-30)
    if np.any((np.abs(roots.imag) > 1e-8) & ~spurious):
        raise NumericalFaultError("spin-flip spectrum has imaginary part above 1e-8")
    for _ in range(2):
        # Newton refinement on the quartic
        poly = poly_at(vals)
        slope = ((4.0 * vals + 3.0 * coeffs[1]) * vals + 2.0 * coeffs[2]) * vals + coeffs[3]
        step = np.where(np.abs(slope) > 1e-30, poly / np.where(slope == 0.0, 1.0, slope), 0.0)
        vals = vals - step
    if np.min(vals) < -EIGEN_CLAMP:
        raise NumericalFaultError("spin-flip spectrum has an eigenvalue below -1e-10")
    return np.sort(np.clip(vals, 0.0, None))[::-1]


def concurrence(rho: TwoQubitDensity, method: str = "svd") -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state.

    ``method="svd"`` (production) computes the four values as singular values
    of the spin-flipped factorization; ``method="char-poly"`` takes square
    roots of :func:`spin_flip_spectrum` and exists for cross-validation.
    """
    if method == "svd":
        lam = wootters_values(rho.matrix)
    elif method == "char-poly":
        lam = np.sqrt(spin_flip_spectrum(rho))
    else:
        raise ValueError(f"unknown concurrence method {method!r}")
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def l1_coherence(rho: TwoQubitDensity) -> float:
    """Sum of the moduli of the 12 off-diagonal density-matrix elements."""
    moduli = np.abs(rho.matrix)
    np.fill_diagonal(moduli, 0.0)
    return float(moduli.sum())


def _clip_range(values: np.ndarray, low: float, high: float, label: str, grid: np.ndarray) -> np.ndarray:
    """Clip rounding residue into the analytic range; fault beyond 1e-10."""
    worst = max(float(np.max(values - high, initial=0.0)), float(np.max(low - values, initial=0.0)))
    if worst > 1e-10:
        k = int(np.argmax(np.maximum(values - high, low - values)))
        raise NumericalFaultError(
            f"{label} leaves [{low}, {high}] by {worst:.3e} at t = {grid[k]}"
        )
    return np.clip(values, low, high)


def cumulative_average(grid: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Running trapezoidal average (1/t) int_0^t f dt on the given grid.

    The first grid point gets the t -> 0 limit, f(grid[0]).
    """
    integral = np.concatenate(
        ([0.0], np.cumsum(0.5 * (values[1:] + values[:-1]) * np.diff(grid)))
    )
    out = np.empty_like(values)
    out[0] = values[0]
    out[1:] = integral[1:] / (grid[1:] - grid[0])
    return out


def metrics_series(
    expansion: FockExpansion,
    cpl: CouplingParams,
    grid: np.ndarray,
    backend=None,
) -> TimeSeries:
    """Evaluate S, W, concurrence, C_l1 and the running mean of S on a grid.

    The grid must be strictly increasing and start at 0.  The per-time
    density matrices come from the selected kernel backend; the concurrence
    is evaluated in one batched eigh + SVD pass.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("time grid must be a nonempty 1-d array")
    if grid[0] != 0.0:
        raise ValueError("time grid must start at 0")
    if grid.size > 1 and np.min(np.diff(grid)) <= 0.0:
        raise ValueError("time grid must be strictly increasing")

    kern = backend if backend is not None else get_backend()
    con = amplitude_constants(cpl, expansion.n_max)
    rho = kern.reduce_rho_series(
        expansion.weights,
        con["wp"], con["wm"],
        con["c12p"], con["c12m"], con["c22p"], con["c22m"],
        con["c23p"], con["c23m"], con["c24"],
        grid,
    )

    traces = np.einsum("tii->t", rho).real
    k_bad = int(np.argmax(np.abs(traces - 1.0)))
    if abs(traces[k_bad] - 1.0) > TRACE_TOL:
        raise NumericalFaultError(
            f"density-matrix trace off by {traces[k_bad] - 1.0:.3e} at t = {grid[k_bad]}"
        )

    rho_gg = (rho[:, 2, 2] + rho[:, 3, 3]).real
    rho_eg = rho[:, 0, 2] + rho[:, 1, 3]
    inversion = 1.0 - 2.0 * rho_gg
    entropy = _clip_range(
        0.5 - 0.5 * inversion**2 - 2.0 * np.abs(rho_eg) ** 2, 0.0, 0.5, "linear entropy", grid
    )

    lam = wootters_values(rho)
    conc = _clip_range(
        np.maximum(0.0, lam[:, 0] - lam[:, 1] - lam[:, 2] - lam[:, 3]),
        0.0, 1.0, "concurrence", grid,
    )
    moduli = np.abs(rho)
    moduli[:, range(4), range(4)] = 0.0
    coh = moduli.sum(axis=(1, 2))

    return TimeSeries(
        grid=grid,
        entropy=entropy,
        inversion=inversion,
        concurrence=conc,
        coherence_l1=coh,
        cumulative_entropy=cumulative_average(grid, entropy),
    )
