"""Initial field state: squeezed-cat Fock expansion and photon statistics.

The environment mode starts in the normalized superposition

    N * [ c |alpha, xi>  +  e^{i phi} sqrt(1 - c^2) |-alpha, xi> ],

where |alpha, xi> = D(alpha) S(xi) |0> is a squeezed coherent state with
xi = r e^{i theta}.  This module builds the truncated Fock expansion of that
state and evaluates its static photon statistics (mean photon number,
Mandel Q, quadrature variances).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateStateError,
    SqueezingDegenerateError,
    TruncationError,
)

DEFAULT_TAIL_TOL = 1e-12
DEFAULT_N_CAP = 512


@dataclass(frozen=True)
class FieldParams:
    """Preparation parameters of the single-mode environment.

    Parameters
    ----------
    alpha : complex
        Coherent amplitude (dimensionless).
    r : float
        Squeezing magnitude, r >= 0.
    theta : float
        Squeezing phase (radians); theta = 0 squeezes the X1 quadrature,
        theta = pi the X2 quadrature.
    phi : float
        Relative phase between the two superposition branches.
    c : float
        Superposition weight in [0, 1]; the second branch carries
        sqrt(1 - c^2).
    """

    alpha: complex
    r: float
    theta: float
    phi: float
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise ValueError(f"squeezing magnitude must satisfy r >= 0, got r = {self.r}")
        if not (math.isfinite(self.c) and 0.0 <= self.c <= 1.0):
            raise ValueError(f"superposition weight must satisfy 0 <= c <= 1, got c = {self.c}")
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ValueError("alpha must be finite")
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("theta and phi must be finite")

    @property
    def mu(self) -> float:
        """cosh r (>= 1)."""
        return math.cosh(self.r)

    @property
    def nu(self) -> complex:
        """e^{i theta} sinh r."""
        return cmath.exp(1j * self.theta) * math.sinh(self.r)


@dataclass(frozen=True)
class FockExpansion:
    """Truncated Fock expansion of the initial field state.

    The physical state is  norm_constant * sum_n coeffs[n] |n>;  tail_mass is
    the probability discarded by truncating at n_max.
    """

    coeffs: np.ndarray
    norm_constant: float
    n_max: int
    tail_mass: float

    @property
    def weights(self) -> np.ndarray:
        """Physical amplitudes norm_constant * coeffs[n] of |n>."""
        return self.norm_constant * self.coeffs


@dataclass(frozen=True)
class FieldStatistics:
    """Static photon statistics of a field state."""

    mean_n: float
    mean_n_sq: float
    mandel_q: float
    var_x1: float
    var_x2: float


def squeezing_factors(r: float, theta: float) -> tuple[float, complex]:
    """Return (mu, nu) = (cosh r, e^{i theta} sinh r) with mu^2 - |nu|^2 = 1."""
    if r < 0:
        raise ValueError(f"squeezing magnitude must satisfy r >= 0, got r = {r}")
    return math.cosh(r), cmath.exp(1j * theta) * math.sinh(r)


def fock_coefficients_closed_form(alpha: complex, r: float, theta: float, n_max: int) -> np.ndarray:
    """Fock amplitudes <n|alpha, xi> from the Hermite-polynomial closed form.

    Evaluates

        C_n = (w / 2 mu)^n / sqrt(n! mu)
              * exp(-|alpha|^2/2 - alpha*^2 e^{i theta} tanh(r)/2)
              * H_n((alpha mu + alpha* nu) / w),       w = sqrt(e^{i theta} sinh 2r),

    using the identity (nu/2mu)^{n/2} = (w/2mu)^n, which makes the branch of
    the square root irrelevant as long as the same w enters the Hermite
    argument.  All factors are combined in log-magnitude + phase form, and the
    Hermite recurrence is rescaled every step, so the evaluation does not
    overflow for n_max well beyond 512.

    This evaluator exists for cross-validation; production code uses
    :func:`fock_coefficients_recurrence`.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if r < 0:
        raise ValueError(f"squeezing magnitude must satisfy r >= 0, got r = {r}")
    if r == 0.0:
        raise SqueezingDegenerateError(
            "r = 0 makes the Hermite argument singular; use coherent_fock_coefficients"
        )
    alpha = complex(alpha)
    mu = math.cosh(r)
    nu = cmath.exp(1j * theta) * math.sinh(r)
    w = cmath.sqrt(cmath.exp(1j * theta) * math.sinh(2.0 * r))
    zeta = (alpha * mu + alpha.conjugate() * nu) / w
    log_ratio = cmath.log(w / (2.0 * mu))
    pref = -0.5 * abs(alpha) ** 2 - 0.5 * alpha.conjugate() ** 2 * cmath.exp(1j * theta) * math.tanh(r)

    out = np.empty(n_max + 1, dtype=np.complex128)
    # H_n = h * exp(scale) with |h| kept near 1
    h_prev = 0.0 + 0.0j
    h = 1.0 + 0.0j
    scale_prev = 0.0
    scale = 0.0
    log_fact = 0.0
    for n in range(n_max + 1):
        if n > 0:
            log_fact += math.log(n)
        if h == 0.0:
            out[n] = 0.0
        else:
            log_c = n * log_ratio - 0.5 * (log_fact + math.log(mu)) + pref
            out[n] = cmath.exp(log_c + cmath.log(h) + scale)
        h_next = 2.0 * zeta * h - 2.0 * n * h_prev * math.exp(scale_prev - scale)
        h_prev, scale_prev = h, scale
        mag = abs(h_next)
        if mag > 0.0:
            scale += math.log(mag)
            h = h_next / mag
        else:
            h = 0.0 + 0.0j
    return out


def fock_coefficients_recurrence(alpha: complex, r: float, theta: float, n_max: int) -> np.ndarray:
    """Fock amplitudes <n|alpha, xi> from the eigenvalue recurrence.

    |alpha, xi> is annihilated by mu*a + nu*a^dagger - (mu alpha + nu alpha*),
    which gives the numerically stable three-term recurrence

        mu sqrt(n+1) C_{n+1} = (mu alpha + nu alpha*) C_n - nu sqrt(n) C_{n-1}

    seeded with the closed-form C_0.  This is the production path.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if r < 0:
        raise ValueError(f"squeezing magnitude must satisfy r >= 0, got r = {r}")
    if r == 0.0:
        raise SqueezingDegenerateError(
            "r = 0 is the coherent-state limit; use coherent_fock_coefficients"
        )
    alpha = complex(alpha)
    mu = math.cosh(r)
    nu = cmath.exp(1j * theta) * math.sinh(r)
    drive = mu * alpha + nu * alpha.conjugate()

    out = np.empty(n_max + 1, dtype=np.complex128)
    out[0] = cmath.exp(
        -0.5 * abs(alpha) ** 2 - 0.5 * alpha.conjugate() ** 2 * cmath.exp(1j * theta) * math.tanh(r)
    ) / math.sqrt(mu)
    if n_max >= 1:
        out[1] = drive * out[0] / mu
    for n in range(1, n_max):
        out[n + 1] = (drive * out[n] - nu * math.sqrt(n) * out[n - 1]) / (mu * math.sqrt(n + 1))
    return out


def coherent_fock_coefficients(alpha: complex, n_max: int) -> np.ndarray:
    """Fock amplitudes of a plain coherent state, e^{-|a|^2/2} a^n / sqrt(n!)."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    alpha = complex(alpha)
    out = np.zeros(n_max + 1, dtype=np.complex128)
    if alpha == 0.0:
        out[0] = 1.0
        return out
    ns = np.arange(n_max + 1)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n_max + 1))))) if n_max else np.zeros(1)
    log_c = -0.5 * abs(alpha) ** 2 + ns * cmath.log(alpha) - 0.5 * log_fact
    np.exp(log_c, out=out)
    return out


def normalization_constant(params: FieldParams) -> float:
    """Normalization N of the two-branch superposition.

    N = [1 + 2 c sqrt(1-c^2) cos(phi) exp(-2 |alpha mu + alpha* nu|^2)]^{-1/2}.
    """
    alpha = complex(params.alpha)
    mu, nu = squeezing_factors(params.r, params.theta)
    overlap = math.exp(-2.0 * abs(alpha * mu + alpha.conjugate() * nu) ** 2)
    bracket = 1.0 + 2.0 * params.c * math.sqrt(1.0 - params.c**2) * math.cos(params.phi) * overlap
    if bracket <= 1e-300:
        raise DegenerateStateError(
            "superposition branches cancel (normalization bracket <= 0); the state is null"
        )
    return bracket**-0.5


def cat_expansion(
    params: FieldParams,
    tol: float = DEFAULT_TAIL_TOL,
    n_cap: int = DEFAULT_N_CAP,
) -> FockExpansion:
    """Build the truncated Fock expansion of the superposition state.

    gamma_n = c C_n(alpha) + e^{i phi} sqrt(1-c^2) C_n(-alpha); the truncation
    n_max is the smallest n <= n_cap whose discarded probability
    1 - N^2 sum_{k<=n} |gamma_k|^2 falls below ``tol``.
    """
    if tol <= 0.0:
        raise ValueError("tail tolerance must be > 0")
    if n_cap < 1:
        raise ValueError("n_cap must be >= 1")
    if params.r == 0.0:
        branch_pos = coherent_fock_coefficients(params.alpha, n_cap)
        branch_neg = coherent_fock_coefficients(-params.alpha, n_cap)
    else:
        branch_pos = fock_coefficients_recurrence(params.alpha, params.r, params.theta, n_cap)
        branch_neg = fock_coefficients_recurrence(-params.alpha, params.r, params.theta, n_cap)
    weight_neg = cmath.exp(1j * params.phi) * math.sqrt(1.0 - params.c**2)
    gamma = params.c * branch_pos + weight_neg * branch_neg

    nconst = normalization_constant(params)
    discarded = 1.0 - nconst**2 * np.cumsum(np.abs(gamma) ** 2)
    below = np.nonzero(discarded < tol)[0]
    if below.size == 0:
        raise TruncationError(
            f"tail mass still {discarded[-1]:.3e} at the cap n = {n_cap}; raise n_cap or tol"
        )
    n_max = int(below[0])
    return FockExpansion(
        coeffs=gamma[: n_max + 1].copy(),
        norm_constant=nconst,
        n_max=n_max,
        tail_mass=float(max(discarded[n_max], 0.0)),
    )


def field_statistics(expansion: FockExpansion) -> FieldStatistics:
    """Photon-number and quadrature statistics by direct Fock sums.

    Uses X1 = (a + a^dagger)/2 and X2 = (a - a^dagger)/2i, so a coherent state
    has var_x1 = var_x2 = 1/4 and Mandel Q = 0.
    """
    gamma = expansion.coeffs
    n2 = expansion.norm_constant**2
    ns = np.arange(gamma.size)
    prob = n2 * np.abs(gamma) ** 2

    mean_n = float(np.dot(ns, prob))
    mean_n_sq = float(np.dot(ns * ns, prob))
    a1 = n2 * np.sum(np.conj(gamma[:-1]) * gamma[1:] * np.sqrt(ns[1:])) if gamma.size > 1 else 0.0j
    a2 = (
        n2 * np.sum(np.conj(gamma[:-2]) * gamma[2:] * np.sqrt(ns[1:-1] * ns[2:]))
        if gamma.size > 2
        else 0.0j
    )

    var_x1 = 0.25 * (1.0 + 2.0 * mean_n + 2.0 * a2.real) - a1.real**2
    var_x2 = 0.25 * (1.0 + 2.0 * mean_n - 2.0 * a2.real) - a1.imag**2
    mandel_q = (mean_n_sq - mean_n**2 - mean_n) / mean_n if mean_n > 0.0 else 0.0
    return FieldStatistics(
        mean_n=mean_n,
        mean_n_sq=mean_n_sq,
        mandel_q=float(mandel_q),
        var_x1=float(var_x1),
        var_x2=float(var_x2),
    )


def closed_form_mean_n(params: FieldParams) -> float:
    """Mean photon number from the closed-form expression (real alpha).

    Evaluates, with h = cosh 2r + cos(theta) sinh 2r,

        N^2 { |alpha|^2 + sinh^2 r
              + 2 c sqrt(1-c^2) e^{-2 |alpha|^2 h}
                [ sinh^2 r - |alpha|^2 cosh 4r - |alpha|^2 cos(theta) sinh 4r ] cos phi }.

    Written for real alpha (it uses |alpha|^2 throughout); agreement with the
    Fock-sum moment of :func:`field_statistics` is asserted by the test suite.
    """
    a2 = abs(complex(params.alpha)) ** 2
    r, theta = params.r, params.theta
    nconst = normalization_constant(params)
    cross_exp = math.exp(-2.0 * a2 * (math.cosh(2 * r) + math.cos(theta) * math.sinh(2 * r)))
    bracket = math.sinh(r) ** 2 - a2 * math.cosh(4 * r) - a2 * math.cos(theta) * math.sinh(4 * r)
    cross = 2.0 * params.c * math.sqrt(1.0 - params.c**2) * cross_exp * bracket * math.cos(params.phi)
    return nconst**2 * (a2 + math.sinh(r) ** 2 + cross)
