"""Parameter sweeps and the linear fits of noise versus long-time mixedness.

Sweeps hold the mean photon number fixed (it barely moves over theta and c at
the default alpha, r) and record, per swept value, the initial-state noise
figures (Mandel Q, X1 variance) together with the long-time average linear
entropy of qubit 1.  Statistics are computed at phi = 0 by default while the
dynamics keep the phi of the base parameters; both follow the figure
conventions and are overridable.

The default horizon t_long = 500 (units of 1/g) was calibrated numerically:
for g = lam the running average S_bar(T) is still far from its ceiling there,
which is the regime where S_bar depends nearly linearly on the initial
photon-number noise.  Beyond T ~ 1000 the super-Poissonian points compress
against the S = 1/2 ceiling and the relation visibly bends, while full
saturation of S_bar itself only happens around T ~ 16000.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import CouplingParams
from .errors import DegenerateAbscissaError
from .field import DEFAULT_N_CAP, DEFAULT_TAIL_TOL, FieldParams, cat_expansion, field_statistics
from .metrics import metrics_series


@dataclass(frozen=True)
class SweepPoint:
    """Noise figures and long-time entropy average at one swept value."""

    theta: float
    c: float
    mandel_q: float
    var_x1: float
    s_bar_long: float


@dataclass(frozen=True)
class LinearFit:
    """Ordinary least-squares line with quality-of-fit figures."""

    slope: float
    intercept: float
    r_squared: float
    residual_max: float


def time_grid(t_end: float, dt: float) -> np.ndarray:
    """Uniform grid 0, dt, ..., covering [0, t_end]."""
    if t_end <= 0.0 or dt <= 0.0:
        raise ValueError("t_end and dt must be > 0")
    steps = int(round(t_end / dt))
    if steps < 1:
        steps = 1
    return np.arange(steps + 1, dtype=np.float64) * (t_end / steps)


def _sweep_point(
    params: FieldParams,
    cpl: CouplingParams,
    grid: np.ndarray,
    stats_phi: float,
    tol: float,
    n_cap: int,
) -> SweepPoint:
    stats = field_statistics(cat_expansion(replace(params, phi=stats_phi), tol, n_cap))
    series = metrics_series(cat_expansion(params, tol, n_cap), cpl, grid)
    return SweepPoint(
        theta=params.theta,
        c=params.c,
        mandel_q=stats.mandel_q,
        var_x1=stats.var_x1,
        s_bar_long=float(series.cumulative_entropy[-1]),
    )


def _tagged(err: Exception, label: str) -> Exception:
    """Same-type copy of err with the sweep coordinate prepended, best effort."""
    try:
        return type(err)(f"{label}: {err}")
    except TypeError:
        return err


def theta_sweep(
    base: FieldParams,
    cpl: CouplingParams,
    thetas,
    t_long: float = 500.0,
    dt: float = 0.1,
    stats_phi: float = 0.0,
    tol: float = DEFAULT_TAIL_TOL,
    n_cap: int = DEFAULT_N_CAP,
) -> list[SweepPoint]:
    """Sweep the squeezing phase, keeping the other base parameters fixed."""
    thetas = [float(t) for t in thetas]
    if not thetas:
        raise ValueError("thetas must be nonempty")
    grid = time_grid(t_long, dt)
    points = []
    for theta in thetas:
        try:
            points.append(
                _sweep_point(replace(base, theta=theta), cpl, grid, stats_phi, tol, n_cap)
            )
        except Exception as err:
            raise _tagged(err, f"theta = {theta}") from err
    return points


def c_sweep(
    base: FieldParams,
    cpl: CouplingParams,
    cs,
    t_long: float = 500.0,
    dt: float = 0.1,
    stats_phi: float = 0.0,
    tol: float = DEFAULT_TAIL_TOL,
    n_cap: int = DEFAULT_N_CAP,
) -> list[SweepPoint]:
    """Sweep the superposition weight, keeping the other base parameters fixed."""
    cs = [float(c) for c in cs]
    if not cs:
        raise ValueError("cs must be nonempty")
    grid = time_grid(t_long, dt)
    points = []
    for c in cs:
        try:
            points.append(_sweep_point(replace(base, c=c), cpl, grid, stats_phi, tol, n_cap))
        except Exception as err:
            raise _tagged(err, f"c = {c}") from err
    return points


def linear_fit(xs, ys) -> LinearFit:
    """Ordinary least squares y = slope*x + intercept with r^2 and residuals.

    Constant ys fit exactly (slope 0) and get r^2 = 1 by convention, since
    SS_tot = 0 with zero residuals.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be 1-d arrays of equal length")
    if xs.size < 3:
        raise ValueError("need at least 3 points to fit")
    x_mean = xs.mean()
    y_mean = ys.mean()
    sxx = float(np.sum((xs - x_mean) ** 2))
    if sxx == 0.0:
        raise DegenerateAbscissaError("all abscissae are equal; the slope is undefined")
    slope = float(np.sum((xs - x_mean) * (ys - y_mean))) / sxx
    intercept = y_mean - slope * x_mean
    residuals = ys - (slope * xs + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((ys - y_mean) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return LinearFit(
        slope=slope,
        intercept=float(intercept),
        r_squared=float(r_squared),
        residual_max=float(np.max(np.abs(residuals))),
    )


def theta_grid(count: int = 11) -> np.ndarray:
    """Evenly spaced squeezing phases from 0 to pi."""
    return np.linspace(0.0, math.pi, count)


def c_grid(count: int = 11) -> np.ndarray:
    """Evenly spaced superposition weights from 0 to 1/sqrt(2)."""
    return np.linspace(0.0, 1.0 / math.sqrt(2.0), count)
