"""Command-line entry point and deterministic CSV/JSON emission.

Subcommands: ``evolve`` (time series of the observables), ``stats`` (static
field statistics), ``sweep`` (theta or c sweep plus linear-fit summary) and
``validate`` (triple agreement of the analytic, spectral and RK4-stepped
propagators).  Numbers are serialized with 17 significant digits so every
emitted file reparses to the exact values that produced it; files are written
atomically (write-then-rename).
"""

from __future__ import annotations

import json
import os
import sys
import tempfile


from .config import RunConfig, parse_config
from .dynamics import amplitude_constants, evolve_state
from .errors import ConfigError, QceError
from .field import cat_expansion, closed_form_mean_n, field_statistics
from .metrics import metrics_series
from .oracle import (
    compare_states,
    numeric_state_series,
    rk4_step_for,
    spectral_state_series,
)
from .sweep import c_grid, c_sweep, linear_fit, theta_grid, theta_sweep, time_grid


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    handle = tempfile.NamedTemporaryFile(
        "w", dir=directory, prefix=".qce-tmp-", encoding="utf-8", newline="", delete=False
    )
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        os.unlink(handle.name)
        raise


def write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str, payload) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _run_evolve(config: RunConfig) -> dict:
    expansion = cat_expansion(config.field, config.tol, config.n_cap)
    grid = time_grid(config.t_end, config.dt)
    series = metrics_series(expansion, config.coupling, grid)
    columns = {
        "t": series.grid,
        "S": series.entropy,
        "W": series.inversion,
        "concurrence": series.concurrence,
        "coherence_l1": series.coherence_l1,
        "S_bar": series.cumulative_entropy,
    }
    if config.fmt == "csv":
        write_csv(config.output, list(columns), zip(*columns.values()))
    else:
        write_json(config.output, {name: [float(v) for v in col] for name, col in columns.items()})
    return {"output": config.output, "rows": int(grid.size), "n_max": expansion.n_max}


def _run_stats(config: RunConfig) -> dict:
    expansion = cat_expansion(config.field, config.tol, config.n_cap)
    stats = field_statistics(expansion)
    record = {
        "mean_n": stats.mean_n,
        "mean_n_closed_form": closed_form_mean_n(config.field),
        "mean_n_sq": stats.mean_n_sq,
        "mandel_q": stats.mandel_q,
        "var_x1": stats.var_x1,
        "var_x2": stats.var_x2,
        "norm_constant": expansion.norm_constant,
        "n_max": expansion.n_max,
        "tail_mass": expansion.tail_mass,
    }
    if config.fmt == "csv":
        write_csv(config.output, list(record), [list(record.values())])
    else:
        write_json(config.output, record)
    return {"output": config.output, "mean_n": stats.mean_n}


def _fit_payload(fit) -> dict:
    return {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "residual_max": fit.residual_max,
    }


def _run_sweep(config: RunConfig) -> dict:
    if config.sweep_values is not None:
        values = list(config.sweep_values)
    elif config.sweep_axis == "theta":
        values = list(theta_grid())
    else:
        values = list(c_grid())
    kwargs = dict(
        t_long=config.t_end,
        dt=config.dt,
        stats_phi=config.stats_phi,
        tol=config.tol,
        n_cap=config.n_cap,
    )
    if config.sweep_axis == "theta":
        points = theta_sweep(config.field, config.coupling, values, **kwargs)
        axis_values = [p.theta for p in points]
    else:
        points = c_sweep(config.field, config.coupling, values, **kwargs)
        axis_values = [p.c for p in points]

    rows = [
        [axis, p.mandel_q, p.var_x1, p.s_bar_long]
        for axis, p in zip(axis_values, points)
    ]
    if config.fmt == "csv":
        write_csv(config.output, ["axis_value", "mandel_q", "var_x1", "s_bar_long"], rows)
    else:
        write_json(
            config.output,
            [
                {"axis_value": r[0], "mandel_q": r[1], "var_x1": r[2], "s_bar_long": r[3]}
                for r in rows
            ],
        )

    s_bar = [p.s_bar_long for p in points]
    fit_report = {"axis": config.sweep_axis}
    if len(points) >= 3:
        fit_report["fit_vs_mandel_q"] = _fit_payload(linear_fit([p.mandel_q for p in points], s_bar))
        fit_report["fit_vs_var_x1"] = _fit_payload(linear_fit([p.var_x1 for p in points], s_bar))
    fit_path = os.path.splitext(config.output)[0] + ".fit.json"
    write_json(fit_path, fit_report)
    return {"output": config.output, "fit_output": fit_path, "points": len(points)}


def _run_validate(config: RunConfig) -> dict:
    expansion = cat_expansion(config.field, config.tol, config.n_cap)
    consts = amplitude_constants(config.coupling, expansion.n_max)
    omega_max = float(consts["wp"][-1])
    # four checkpoints spanning the horizon
    times = [config.t_end * f for f in (0.25, 0.5, 0.75, 1.0)]
    dt = config.dt if config.dt is not None else rk4_step_for(omega_max, config.t_end, config.oracle_tol)

    analytic = [evolve_state(expansion, config.coupling, t) for t in times]
    spectral = spectral_state_series(expansion, config.coupling, times)
    stepped = numeric_state_series(expansion, config.coupling, times, dt)

    dev_spec = max(compare_states(a, s) for a, s in zip(analytic, spectral))
    dev_step = max(compare_states(a, s) for a, s in zip(analytic, stepped))
    dev_cross = max(compare_states(s, p) for s, p in zip(spectral, stepped))
    report = {
        "t_end": config.t_end,
        "checkpoints": times,
        "rk4_dt": dt,
        "n_max": expansion.n_max,
        "max_dev_analytic_vs_spectral": dev_spec,
        "max_dev_analytic_vs_stepped": dev_step,
        "max_dev_spectral_vs_stepped": dev_cross,
        "rk4_norm_drift": stepped[0].norm_drift,
        "tolerance": config.oracle_tol,
        "passed": bool(max(dev_spec, dev_step, dev_cross) < config.oracle_tol),
    }
    write_json(config.output, report)
    if not report["passed"]:
        raise QceError(
            f"oracle deviation {max(dev_spec, dev_step, dev_cross):.3e} exceeds "
            f"tolerance {config.oracle_tol:.1e} (report: {config.output})"
        )
    return {"output": config.output, "max_deviation": max(dev_spec, dev_step, dev_cross)}


def run(config: RunConfig) -> dict:
    """Execute one mode; returns a small summary dict for logging."""
    if config.mode == "evolve":
        return _run_evolve(config)
    if config.mode == "stats":
        return _run_stats(config)
    if config.mode == "sweep":
        return _run_sweep(config)
    if config.mode == "validate":
        return _run_validate(config)
    raise ConfigError(f"unknown mode {config.mode!r}", key="mode")


def main(argv=None) -> int:
    """CLI entry point; returns the process exit status."""
    args = sys.argv[1:] if argv is None else list(argv)
    try:
        config = parse_config(args)
    except ConfigError as err:
        record = {"error": "ConfigError", "message": str(err)}
        if err.key is not None:
            record["key"] = err.key
        if err.line is not None:
            record["line"] = err.line
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return 2
    try:
        summary = run(config)
    except QceError as err:
        print(json.dumps({"error": type(err).__name__, "message": str(err)}, sort_keys=True),
              file=sys.stderr)
        return 1
    print(json.dumps({"mode": config.mode, **summary}, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
