"""Closed-form interaction-picture evolution of the qubits + field system.

The excitation-conserving interaction Hamiltonian couples, within each
manifold of total excitation n+1, only the four kets

    |e1 e2, n-1>,  |e1 g2, n>,  |g1 e2, n>,  |g1 g2, n+1>

(basis order used throughout).  Starting from |e1, g2> x |field>, the exact
amplitudes on those kets are trigonometric functions of the two manifold
frequencies; this module evaluates them and assembles the joint state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalFaultError
from .field import FockExpansion

# below this, sin(w t)/w is replaced by its limit t (w = 0 occurs at n = 0 and g = 0)
OMEGA_MINUS_FLOOR = 1e-12


@dataclass(frozen=True)
class CouplingParams:
    """Coupling strengths: lam between the qubits, g from qubit 2 to the field."""

    lam: float
    g: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise ValueError(f"qubit-qubit coupling must satisfy lam >= 0, got {self.lam}")
        if not (math.isfinite(self.g) and self.g >= 0.0):
            raise ValueError(f"qubit-field coupling must satisfy g >= 0, got {self.g}")
        if self.lam == 0.0 and self.g == 0.0:
            raise ValueError("lam and g must not both be zero (no dynamics)")


@dataclass(frozen=True)
class ManifoldSpectrum:
    """Couplings and eigenfrequencies of one excitation manifold."""

    n: int
    a_n: float
    b_n: float
    r_n: float
    omega_plus: float
    omega_minus: float


@dataclass(frozen=True)
class JointState:
    """Joint qubits + field state at one time.

    amps[n] holds the quadruple (A12, A22, A23, A24) for manifold n; the
    physical amplitude on each basis ket is weights.weights[n] * amps[n, j].
    norm_drift is populated by the numeric propagator (None for exact paths).
    """

    time: float
    weights: FockExpansion
    amps: np.ndarray
    norm_drift: float | None = None

    def norm_sq(self) -> float:
        """Total squared norm, 1 - tail_mass up to rounding."""
        w2 = np.abs(self.weights.weights) ** 2
        return float(np.dot(w2, np.sum(np.abs(self.amps) ** 2, axis=1)))


def manifold_spectrum(n: int, cpl: CouplingParams) -> ManifoldSpectrum:
    """Frequencies omega_+/- and couplings (a_n, b_n, r_n) of manifold n."""
    if n < 0:
        raise ValueError("manifold index must be >= 0")
    g2 = cpl.g**2
    l2 = cpl.lam**2
    a_n = cpl.g * math.sqrt(n)
    b_n = cpl.g * math.sqrt(n + 1)
    r_n = math.sqrt((g2 + l2) ** 2 + 4.0 * n * g2 * l2)
    half_sum = 0.5 * ((2 * n + 1) * g2 + l2)
    rad_minus = half_sum - 0.5 * r_n
    # analytically >= 0; tolerate rounding, flag anything worse
    if rad_minus < -1e-12 * max(1.0, half_sum):
        raise NumericalFaultError(f"negative omega_- radicand {rad_minus} at n = {n}")
    return ManifoldSpectrum(
        n=n,
        a_n=a_n,
        b_n=b_n,
        r_n=r_n,
        omega_plus=math.sqrt(half_sum + 0.5 * r_n),
        omega_minus=math.sqrt(max(rad_minus, 0.0)),
    )


def manifold_amplitudes(
    spec: ManifoldSpectrum, cpl: CouplingParams, t: float
) -> tuple[complex, complex, complex, complex]:
    """Amplitude quadruple (A12, A22, A23, A24) of manifold n at time t.

    At t = 0 the quadruple is (0, 1, 0, 0); the modulus-square sum is 1 for
    every t (each manifold evolves unitarily).
    """
    wp, wm, rn = spec.omega_plus, spec.omega_minus, spec.r_n
    b2 = spec.b_n**2
    sp, cp = math.sin(wp * t), math.cos(wp * t)
    sm, cm = math.sin(wm * t), math.cos(wm * t)
    sin_over_wm = t if wm < OMEGA_MINUS_FLOOR else sm / wm

    a12 = 1j * (spec.a_n / rn) * ((b2 - wp**2) / wp * sp - (b2 - wm**2) * sin_over_wm)
    a22 = ((wp**2 - b2) * cp - (wm**2 - b2) * cm) / rn
    a23 = -1j * (cpl.lam / rn) * (wp * sp - wm * sm)
    a24 = (cpl.lam * spec.b_n / rn) * (cp - cm)
    return a12, a22, a23, a24


def amplitude_constants(cpl: CouplingParams, n_max: int) -> dict[str, np.ndarray]:
    """Per-manifold constants for n = 0..n_max, precomputed for the kernels.

    With these, the quadruple at time t is

        A12 = i (c12p sin(wp t) - c12m * slim)     slim = sin(wm t)/wm, -> t as wm -> 0
        A22 = c22p cos(wp t) - c22m cos(wm t)
        A23 = -i (c23p sin(wp t) - c23m sin(wm t))
        A24 = c24 (cos(wp t) - cos(wm t))
    """
    ns = np.arange(n_max + 1, dtype=np.float64)
    g2 = cpl.g**2
    l2 = cpl.lam**2
    a = cpl.g * np.sqrt(ns)
    b = cpl.g * np.sqrt(ns + 1.0)
    rn = np.sqrt((g2 + l2) ** 2 + 4.0 * ns * g2 * l2)
    half_sum = 0.5 * ((2.0 * ns + 1.0) * g2 + l2)
    wp = np.sqrt(half_sum + 0.5 * rn)
    wm = np.sqrt(np.maximum(half_sum - 0.5 * rn, 0.0))
    b2 = b * b
    return {
        "wp": wp,
        "wm": wm,
        "c12p": a * (b2 - wp * wp) / (rn * wp),
        "c12m": a * (b2 - wm * wm) / rn,
        "c22p": (wp * wp - b2) / rn,
        "c22m": (wm * wm - b2) / rn,
        "c23p": cpl.lam * wp / rn,
        "c23m": cpl.lam * wm / rn,
        "c24": cpl.lam * b / rn,
    }


def amplitudes_at(consts: dict[str, np.ndarray], t: float) -> np.ndarray:
    """(n_max+1, 4) amplitude quadruples at one time, from precomputed constants."""
    wp, wm = consts["wp"], consts["wm"]
    sp, cp = np.sin(wp * t), np.cos(wp * t)
    sm, cm = np.sin(wm * t), np.cos(wm * t)
    slim = np.where(wm < OMEGA_MINUS_FLOOR, t, sm / np.where(wm < OMEGA_MINUS_FLOOR, 1.0, wm))
    out = np.empty((wp.size, 4), dtype=np.complex128)
    out[:, 0] = 1j * (consts["c12p"] * sp - consts["c12m"] * slim)
    out[:, 1] = consts["c22p"] * cp - consts["c22m"] * cm
    out[:, 2] = -1j * (consts["c23p"] * sp - consts["c23m"] * sm)
    out[:, 3] = consts["c24"] * (cp - cm)
    return out


def evolve_state(expansion: FockExpansion, cpl: CouplingParams, t: float) -> JointState:
    """Exact joint state at time t from the closed-form manifold amplitudes."""
    if t < 0:
        raise ValueError("time must be >= 0")
    consts = amplitude_constants(cpl, expansion.n_max)
    amps = amplitudes_at(consts, t)

    unit_defect = np.max(np.abs(np.sum(np.abs(amps) ** 2, axis=1) - 1.0))
    if unit_defect > 1e-8:
        raise NumericalFaultError(
            f"per-manifold unitarity violated by {unit_defect:.3e} at t = {t}"
        )
    state = JointState(time=float(t), weights=expansion, amps=amps)
    if abs(state.norm_sq() - 1.0) > 1e-9 + expansion.tail_mass:
        raise NumericalFaultError(f"global norm deviates from 1 at t = {t}")
    return state
